//! Named algebra presentations: coefficient rings, golden Ext rings, and
//! homology presentations, for each supported base field.
//!
//! Degree conventions (the `t`-convention used throughout the crate):
//! `|τ| = (0,0,−1)`, `|ρ| = (0,−1,−1)`, `|u| = (0,−1,−1)`, `|[ρτ]| = (0,−1,−2)`,
//! `|v₀| = (1,1,0)`, `|vₙ| = (1,2ⁿ⁺¹−1,2ⁿ−1)` in `(s,t,u)`;
//! `|τ̄ᵢ| = (2ⁱ⁺¹−1,2ⁱ−1)` and `|ξ̄ᵢ| = (2ⁱ⁺¹−2,2ⁱ−1)` in `(t,u)`.
//! Coefficient-level algebras (`𝕄₂`, `A//E(m)`, the even part `P`) are
//! `(t,u)`-graded; Ext rings are `(s,t,u)`-graded.

use super::{AlgebraError, AlgebraPresentation, GeneratorInfo, Polynomial};
use crate::grading::MultiDegree;

/// Base field of the motivic homotopy category the algebra lives over.
///
/// `Fq(q)` requires odd `q`; the behavior splits by `q mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoefficientField {
    /// The complex numbers (or any algebraically closed field of char 0).
    C,
    /// The real numbers.
    R,
    /// A finite field with `q` elements, `q` odd.
    Fq(u32),
}

/// Residue behavior of an odd prime power `q` modulo 4, with the 2-adic
/// valuation that controls the Adams differential pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqClass {
    /// `q ≡ 1 (mod 4)`; `nu = ν₂(q−1)`.
    OneMod4 {
        /// 2-adic valuation of `q − 1`.
        nu: u32,
    },
    /// `q ≡ 3 (mod 4)`; `nu = ν₂(q²−1)`.
    ThreeMod4 {
        /// 2-adic valuation of `q² − 1`.
        nu: u32,
    },
}

/// 2-adic valuation.
#[must_use]
pub fn nu2(x: u64) -> u32 {
    assert!(x != 0, "nu2(0) is undefined");
    x.trailing_zeros()
}

impl CoefficientField {
    /// Residue class data for finite fields; `None` over `C` and `R`.
    #[must_use]
    pub fn fq_class(self) -> Option<FqClass> {
        match self {
            CoefficientField::Fq(q) => {
                assert!(q % 2 == 1 && q >= 3, "finite base fields must have odd q >= 3");
                if q % 4 == 1 {
                    Some(FqClass::OneMod4 { nu: nu2(u64::from(q) - 1) })
                } else {
                    Some(FqClass::ThreeMod4 {
                        nu: nu2(u64::from(q) * u64::from(q) - 1),
                    })
                }
            }
            _ => None,
        }
    }

    /// Whether the coefficient ring contains a nonzero class of degree
    /// `(t,u) = (−1,−1)` (the class `ρ` over `R`, the class `u = ρ` over
    /// `F_q` with `q ≡ 3 (mod 4)`).
    #[must_use]
    pub fn has_rho(self) -> bool {
        matches!(self, CoefficientField::R)
            || matches!(self.fq_class(), Some(FqClass::ThreeMod4 { .. }))
    }

    /// Short identifier used in presentation names (`C`, `R`, `F3`, ...).
    #[must_use]
    pub fn short_name(self) -> String {
        match self {
            CoefficientField::C => "C".to_owned(),
            CoefficientField::R => "R".to_owned(),
            CoefficientField::Fq(q) => format!("F{q}"),
        }
    }
}

impl std::fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.short_name())
    }
}

fn must(presentation: Result<AlgebraPresentation, AlgebraError>) -> AlgebraPresentation {
    presentation.expect("builtin presentation is valid by construction")
}

/// The motivic cohomology of a point, `𝕄₂ = H^{**}(Spec k; F₂)`,
/// `(t,u)`-graded:
/// `C`: `F₂[τ]`; `R`: `F₂[τ,ρ]`; `F_q`: `F₂[τ,u]/u²` (with `u = ρ` when
/// `q ≡ 3 (mod 4)`).
#[must_use]
pub fn m2(field: CoefficientField) -> AlgebraPresentation {
    let tau = GeneratorInfo::new("tau", MultiDegree::tu(0, -1));
    let gens = match field {
        CoefficientField::C => vec![tau],
        CoefficientField::R => {
            vec![tau, GeneratorInfo::new("rho", MultiDegree::tu(-1, -1))]
        }
        CoefficientField::Fq(_) => {
            let mut u = GeneratorInfo::nilpotent("u", MultiDegree::tu(-1, -1), 2);
            if field.has_rho() {
                u = u.with_alias("rho");
            }
            vec![tau, u]
        }
    };
    must(AlgebraPresentation::new(
        &format!("M2_{field}"),
        gens,
        vec![],
        vec![],
    ))
}

/// `Ext_{E(0)}(𝕄₂)`, the target of the zero-slice calculations,
/// `(s,t,u)`-graded:
/// `C`: `F₂[τ,v₀]`; `R`: `F₂[τ²,ρ,v₀]/(ρv₀)`;
/// `F_q, q≡1`: `F₂[τ,u,v₀]/u²`;
/// `F_q, q≡3`: `F₂[τ²,ρ,[ρτ],v₀]/(ρ²,ρ[ρτ],[ρτ]²,ρv₀)`.
#[must_use]
pub fn ext_e0(field: CoefficientField) -> AlgebraPresentation {
    let name = format!("Ext_E0_{field}");
    let v0 = GeneratorInfo::new("v0", MultiDegree::stu(1, 1, 0)).with_alias("h0");
    match field {
        CoefficientField::C => must(AlgebraPresentation::new(
            &name,
            vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)), v0],
            vec![],
            vec![],
        )),
        CoefficientField::R => {
            let gens = vec![
                GeneratorInfo::new("tau2", MultiDegree::stu(0, 0, -2)),
                GeneratorInfo::new("rho", MultiDegree::stu(0, -1, -1)),
                v0,
            ];
            let mut a = must(AlgebraPresentation::new(&name, gens, vec![], vec![]));
            let t = a.monomial(&[("rho", 1), ("v0", 1)]);
            a.truncations.push(t);
            a
        }
        CoefficientField::Fq(_) => {
            if field.has_rho() {
                ext_fq3_collapse(&name, &[])
            } else {
                let gens = vec![
                    GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)),
                    GeneratorInfo::nilpotent("u", MultiDegree::stu(0, -1, -1), 2),
                    v0,
                ];
                must(AlgebraPresentation::new(&name, gens, vec![], vec![]))
            }
        }
    }
}

// Shared shape of the `q ≡ 3 (mod 4)` one-Bockstein collapse:
// `F₂[τ²,ρ,[ρτ],v₀,extra...]/(ρ²,ρ[ρτ],[ρτ]²,ρv₀)`.
fn ext_fq3_collapse(name: &str, extra_vs: &[u32]) -> AlgebraPresentation {
    let mut gens = vec![
        GeneratorInfo::new("tau2", MultiDegree::stu(0, 0, -2)),
        GeneratorInfo::nilpotent("rho", MultiDegree::stu(0, -1, -1), 2),
        GeneratorInfo::nilpotent("rhotau", MultiDegree::stu(0, -1, -2), 2),
        GeneratorInfo::new("v0", MultiDegree::stu(1, 1, 0)).with_alias("h0"),
    ];
    for &n in extra_vs {
        gens.push(GeneratorInfo::new(
            &format!("v{n}"),
            MultiDegree::stu(1, (1 << (n + 1)) - 1, (1 << n) - 1),
        ));
    }
    let mut a = must(AlgebraPresentation::new(name, gens, vec![], vec![]));
    let t1 = a.monomial(&[("rho", 1), ("rhotau", 1)]);
    let t2 = a.monomial(&[("rho", 1), ("v0", 1)]);
    a.truncations.push(t1);
    a.truncations.push(t2);
    a.truncations.sort();
    a
}

/// `Ext_{E(1)}(𝕄₂)`, the Adams `E₂` for `kgl`, `(s,t,u)`-graded.
///
/// Over `R` this is the corrected closed form: the literal four-generator
/// ring `F₂[τ⁴,ρ,v₀,v₁]/(ρv₀,ρ³v₁)` misses the classes `τ^{4a+2}v₀^{c≥1}v₁^d`;
/// the indecomposable `w = [τ²v₀]` at `(1,1,−2)` generates them, with
/// `w² = τ⁴v₀²` and `ρw = 0`.
#[must_use]
pub fn ext_kgl(field: CoefficientField) -> AlgebraPresentation {
    let name = format!("Ext_E1_kgl_{field}");
    let v0 = GeneratorInfo::new("v0", MultiDegree::stu(1, 1, 0)).with_alias("h0");
    let v1 = GeneratorInfo::new("v1", MultiDegree::stu(1, 3, 1));
    match field {
        CoefficientField::C => must(AlgebraPresentation::new(
            &name,
            vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)), v0, v1],
            vec![],
            vec![],
        )),
        CoefficientField::R => {
            let gens = vec![
                GeneratorInfo::new("w", MultiDegree::stu(1, 1, -2)),
                GeneratorInfo::new("tau4", MultiDegree::stu(0, 0, -4)),
                GeneratorInfo::new("rho", MultiDegree::stu(0, -1, -1)),
                v0,
                v1,
            ];
            let proto = must(AlgebraPresentation::new(&name, gens.clone(), vec![], vec![]));
            let w = proto.gen_index("w").unwrap();
            let rhs = proto.polynomial(&[&[("tau4", 1), ("v0", 2)]]);
            let truncs = vec![
                proto.monomial(&[("rho", 1), ("v0", 1)]),
                proto.monomial(&[("rho", 3), ("v1", 1)]),
                proto.monomial(&[("rho", 1), ("w", 1)]),
            ];
            let mut a = must(AlgebraPresentation::new(&name, gens, vec![(w, rhs)], truncs));
            a.push_note(
                "closed form includes the indecomposable w = [tau^2 v0] with w^2 = tau4*v0^2",
            );
            a
        }
        CoefficientField::Fq(_) => {
            if field.has_rho() {
                ext_fq3_collapse(&name, &[1])
            } else {
                let gens = vec![
                    GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)),
                    GeneratorInfo::nilpotent("u", MultiDegree::stu(0, -1, -1), 2),
                    v0,
                    v1,
                ];
                must(AlgebraPresentation::new(&name, gens, vec![], vec![]))
            }
        }
    }
}

/// `Ext_{E(Q_n)}(𝕄₂)`, the Adams `E₂` for `k(n)`, `(s,t,u)`-graded.
///
/// `C`: `F₂[τ,vₙ]`.
/// `R`: monomial basis `ρ^a τ^m vₙ^b` with `bitₙ(m) = 0` and not
/// (`a ≥ 2ⁿ⁺¹−1` and `b ≥ 1`); presented as
/// `F₂[τ,t_{n+1},ρ,vₙ]/(τ^{2ⁿ}, ρ^{2ⁿ⁺¹−1}vₙ)` where `t_{n+1}` plays
/// `τ^{2ⁿ⁺¹}`.
/// `F_q` (both classes): `F₂[τ,vₙ]⊗Λ(u)` — the higher Bockstein target is
/// `u`-torsion, so both residue classes collapse the same way.
#[must_use]
pub fn ext_eqn(n: u32, field: CoefficientField) -> AlgebraPresentation {
    assert!(n >= 1, "k(n) requires n >= 1");
    let name = format!("Ext_EQ{n}_{field}");
    let vn = GeneratorInfo::new(
        &format!("v{n}"),
        MultiDegree::stu(1, (1 << (n + 1)) - 1, (1 << n) - 1),
    );
    match field {
        CoefficientField::C => must(AlgebraPresentation::new(
            &name,
            vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)), vn],
            vec![],
            vec![],
        )),
        CoefficientField::R => {
            let rho_pow = (1u16 << (n + 1)) - 1;
            let gens = vec![
                GeneratorInfo::nilpotent("tau", MultiDegree::stu(0, 0, -1), u32::from(1u32 << n)),
                GeneratorInfo::new(
                    &format!("t{}", n + 1),
                    MultiDegree::stu(0, 0, -(1 << (n + 1))),
                ),
                GeneratorInfo::new("rho", MultiDegree::stu(0, -1, -1)),
                vn,
            ];
            let mut a = must(AlgebraPresentation::new(&name, gens, vec![], vec![]));
            let t = a.monomial(&[("rho", rho_pow), (&format!("v{n}"), 1)]);
            a.truncations.push(t);
            a.truncations.sort();
            a.push_note(&format!(
                "t{} stands for tau^{}: the basis is rho^a tau^m v{n}^b with bit_{n}(m) = 0",
                n + 1,
                1 << (n + 1)
            ));
            a
        }
        CoefficientField::Fq(_) => {
            let mut u = GeneratorInfo::nilpotent("u", MultiDegree::stu(0, -1, -1), 2);
            if field.has_rho() {
                u = u.with_alias("rho");
            }
            must(AlgebraPresentation::new(
                &name,
                vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)), u, vn],
                vec![],
                vec![],
            ))
        }
    }
}

/// `Ext_{E(m)}(𝕄₂)`, the Adams `E₂` for `BPGL⟨m⟩`, `(s,t,u)`-graded.
/// Only the collapsed closed forms are provided: `C` and `F_q, q≡1` are
/// `F₂[τ,v₀,…,v_m]` (tensored with `Λ(u)` over `F_q`); `F_q, q≡3` is the
/// one-Bockstein collapse.  Over `R` there is no closed form — callers run
/// the ρ-Bockstein engine instead.
#[must_use]
pub fn ext_bpgl(m: u32, field: CoefficientField) -> AlgebraPresentation {
    let name = format!("Ext_E{m}_BPGL{m}_{field}");
    let vs = |a: &mut Vec<GeneratorInfo>| {
        for n in 0..=m {
            let mut g = GeneratorInfo::new(
                &format!("v{n}"),
                MultiDegree::stu(1, (1 << (n + 1)) - 1, (1 << n) - 1),
            );
            if n == 0 {
                g = g.with_alias("h0");
            }
            a.push(g);
        }
    };
    match field {
        CoefficientField::C => {
            let mut gens = vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1))];
            vs(&mut gens);
            must(AlgebraPresentation::new(&name, gens, vec![], vec![]))
        }
        CoefficientField::R => {
            panic!("no closed Ext presentation for BPGL<m> over R; run the rho-Bockstein engine")
        }
        CoefficientField::Fq(_) => {
            if field.has_rho() {
                let extra: Vec<u32> = (1..=m).collect();
                ext_fq3_collapse(&name, &extra)
            } else {
                let mut gens = vec![
                    GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)),
                    GeneratorInfo::nilpotent("u", MultiDegree::stu(0, -1, -1), 2),
                ];
                vs(&mut gens);
                must(AlgebraPresentation::new(&name, gens, vec![], vec![]))
            }
        }
    }
}

// Degrees of the dual Steenrod generators, `(t,u)`-graded.
fn taubar_degree(i: u32) -> MultiDegree {
    MultiDegree::tu((1 << (i + 1)) - 1, (1 << i) - 1)
}
fn xibar_degree(i: u32) -> MultiDegree {
    MultiDegree::tu((1 << (i + 1)) - 2, (1 << i) - 1)
}

/// `A//E(m)`: the quotient Hopf algebroid `𝕄₂[τ̄_{m+1},…, ξ̄₁,…]` with
/// `τ̄ᵢ² = τ·ξ̄ᵢ₊₁ + ρ·τ̄ᵢ₊₁`, `(t,u)`-graded.
///
/// The infinite generator list is truncated to the functional budget
/// `phi_budget` (with `φ = 2t − 3u`): generators above the budget cannot
/// occur in any monomial whose `φ` fits, and a square whose rewrite partners
/// are excluded is truncated to zero, which is sound for the same reason.
/// Pass `2·φ_max(window)` so that pairwise products of window monomials
/// still normalize correctly.
pub fn a_mod_e(
    m: u32,
    field: CoefficientField,
    phi_budget: i32,
) -> Result<AlgebraPresentation, AlgebraError> {
    let phi = |d: &MultiDegree| 2 * d.t - 3 * d.u;
    let mut taubars: Vec<u32> = Vec::new();
    let mut i = m + 1;
    while phi(&taubar_degree(i)) <= phi_budget {
        taubars.push(i);
        i += 1;
    }
    let mut xibars: Vec<u32> = Vec::new();
    let mut j = 1;
    while phi(&xibar_degree(j)) <= phi_budget {
        xibars.push(j);
        j += 1;
    }

    let mut gens: Vec<GeneratorInfo> = Vec::new();
    for &i in &taubars {
        gens.push(GeneratorInfo::new(&format!("taubar{i}"), taubar_degree(i)));
    }
    for &j in &xibars {
        gens.push(GeneratorInfo::new(&format!("xibar{j}"), xibar_degree(j)));
    }
    gens.push(GeneratorInfo::new("tau", MultiDegree::tu(0, -1)));
    match field {
        CoefficientField::C => {}
        CoefficientField::R => gens.push(GeneratorInfo::new("rho", MultiDegree::tu(-1, -1))),
        CoefficientField::Fq(_) => {
            let mut u = GeneratorInfo::nilpotent("u", MultiDegree::tu(-1, -1), 2);
            if field.has_rho() {
                u = u.with_alias("rho");
            }
            gens.push(u);
        }
    }

    let find = |gens: &[GeneratorInfo], name: &str| gens.iter().position(|g| g.name == name);
    let mut rewrites: Vec<(usize, Polynomial)> = Vec::new();
    let mut extra_truncs: Vec<usize> = Vec::new();
    for &i in &taubars {
        let this = find(&gens, &format!("taubar{i}")).unwrap();
        let xib = find(&gens, &format!("xibar{}", i + 1));
        let taub_next = find(&gens, &format!("taubar{}", i + 1));
        let rho_like = match field {
            CoefficientField::C => None,
            CoefficientField::R => find(&gens, "rho"),
            CoefficientField::Fq(_) => find(&gens, "u"),
        };
        let need_next = field != CoefficientField::C;
        match (xib, taub_next, need_next) {
            (Some(x), _, false) | (Some(x), Some(_), true) => {
                let tau_idx = find(&gens, "tau").unwrap();
                let mut p = Polynomial::zero();
                let mut m1 = super::Monomial::one(gens.len());
                m1.exps[tau_idx] = 1;
                m1.exps[x] = 1;
                p.toggle(m1);
                if need_next {
                    let mut m2 = super::Monomial::one(gens.len());
                    m2.exps[rho_like.unwrap()] = 1;
                    m2.exps[taub_next.unwrap()] = 1;
                    p.toggle(m2);
                }
                rewrites.push((this, p));
            }
            _ => extra_truncs.push(this),
        }
    }
    let mut truncs: Vec<super::Monomial> = Vec::new();
    for idx in extra_truncs {
        let mut t = super::Monomial::one(gens.len());
        t.exps[idx] = 2;
        truncs.push(t);
    }

    let mut a = AlgebraPresentation::new(
        &format!("AmodE{m}_{field}"),
        gens,
        rewrites,
        truncs,
    )?;
    a.push_note(&format!(
        "generator indices truncated to the functional budget {phi_budget} (phi = 2t-3u)"
    ));
    if matches!(field, CoefficientField::Fq(_)) {
        a.push_note(
            "taubar squares reuse the characteristic-0 relation with u in place of rho; \
             dimensions over F_q are modeled, not independently derived",
        );
    }
    Ok(a)
}

/// The even dual subalgebra `P = 𝕄₂[ξ̄₁,ξ̄₂,…]`, `(t,u)`-graded, truncated
/// to the functional budget like [`a_mod_e`].  This is the image of the
/// algebraic-cobordism homology inside `A//E(0)`, used by the `MGL`
/// sliceability diagnostic.
pub fn p_even(
    field: CoefficientField,
    phi_budget: i32,
) -> Result<AlgebraPresentation, AlgebraError> {
    let phi = |d: &MultiDegree| 2 * d.t - 3 * d.u;
    let mut gens: Vec<GeneratorInfo> = Vec::new();
    let mut j = 1;
    while phi(&xibar_degree(j)) <= phi_budget {
        gens.push(GeneratorInfo::new(&format!("xibar{j}"), xibar_degree(j)));
        j += 1;
    }
    gens.push(GeneratorInfo::new("tau", MultiDegree::tu(0, -1)));
    match field {
        CoefficientField::C => {}
        CoefficientField::R => gens.push(GeneratorInfo::new("rho", MultiDegree::tu(-1, -1))),
        CoefficientField::Fq(_) => {
            gens.push(GeneratorInfo::nilpotent("u", MultiDegree::tu(-1, -1), 2));
        }
    }
    AlgebraPresentation::new(&format!("P_{field}"), gens, vec![], vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::DegreeWindow;

    #[test]
    fn fq_classes() {
        assert_eq!(
            CoefficientField::Fq(5).fq_class(),
            Some(FqClass::OneMod4 { nu: 2 })
        );
        assert_eq!(
            CoefficientField::Fq(9).fq_class(),
            Some(FqClass::OneMod4 { nu: 3 })
        );
        assert_eq!(
            CoefficientField::Fq(3).fq_class(),
            Some(FqClass::ThreeMod4 { nu: 3 })
        );
        assert!(CoefficientField::Fq(3).has_rho());
        assert!(!CoefficientField::Fq(5).has_rho());
    }

    #[test]
    fn kgl_r_survivor_pattern() {
        // The corrected closed form must contain tau^{4a+2} v0^{c>=1} v1^d
        // (as w*tau4^a*v0^{c-1}*v1^d) and must NOT contain tau^2 itself.
        let kgl = ext_kgl(CoefficientField::R);
        // tau^2: (s,t,u) = (0,0,-2): nothing there.
        assert!(kgl.basis_in_degree(&MultiDegree::stu(0, 0, -2)).unwrap().is_empty());
        // tau^2 v0 = w: (1,1,-2).
        assert_eq!(kgl.basis_in_degree(&MultiDegree::stu(1, 1, -2)).unwrap().len(), 1);
        // tau^2 v0^2 = w*v0: (2,2,-2).
        let b = kgl.basis_in_degree(&MultiDegree::stu(2, 2, -2)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(kgl.label(&b[0]), "w*v0");
        // w^2 = tau4*v0^2: the square rewrites away.
        let w2 = kgl.monomial(&[("w", 2)]);
        let nf = kgl.normal_form(&w2);
        assert_eq!(kgl.render(&nf), "tau4*v0^2");
        // rho*w = 0.
        assert!(kgl.normal_form(&kgl.monomial(&[("rho", 1), ("w", 1)])).is_zero());
    }

    #[test]
    fn eqn_r_bit_pattern() {
        // Ext_{E(Q_1)}(M2^R): tau-powers with bit_1 = 0, so tau^2 and tau^3
        // are absent while tau^4 (= t2) and tau^5 (= tau*t2) are present.
        let e = ext_eqn(1, CoefficientField::R);
        let at = |m: i32| e.basis_in_degree(&MultiDegree::stu(0, 0, -m)).unwrap().len();
        assert_eq!(at(0), 1);
        assert_eq!(at(1), 1);
        assert_eq!(at(2), 0);
        assert_eq!(at(3), 0);
        assert_eq!(at(4), 1);
        assert_eq!(at(5), 1);
        assert_eq!(at(6), 0);
        assert_eq!(at(8), 1);
        // rho^3 v1 = 0 but rho^2 v1 lives.
        assert!(e.normal_form(&e.monomial(&[("rho", 3), ("v1", 1)])).is_zero());
        assert!(!e.normal_form(&e.monomial(&[("rho", 2), ("v1", 1)])).is_zero());
    }

    #[test]
    fn fq3_collapse_relations() {
        let e = ext_e0(CoefficientField::Fq(3));
        for dead in [
            e.monomial(&[("rho", 2)]),
            e.monomial(&[("rho", 1), ("rhotau", 1)]),
            e.monomial(&[("rhotau", 2)]),
            e.monomial(&[("rho", 1), ("v0", 1)]),
        ] {
            assert!(e.normal_form(&dead).is_zero());
        }
        // [rhotau]*v0 survives (it is not a boundary).
        assert!(!e.normal_form(&e.monomial(&[("rhotau", 1), ("v0", 1)])).is_zero());
    }

    #[test]
    fn a_mod_e_budget_is_product_safe() {
        // With budget 2*phi_max, products of two window monomials normalize
        // without touching excluded generators.
        let w = DegreeWindow::from_ranges((0, 12), (-6, 6), (0, 8));
        let probe = a_mod_e(0, CoefficientField::R, 1).unwrap();
        let phi_max = probe.phi_max(&w).unwrap();
        let a = a_mod_e(0, CoefficientField::R, 2 * phi_max).unwrap();
        let basis = a.basis_in_window(&w).unwrap();
        let flat: Vec<_> = basis.values().flatten().collect();
        // Sample some products deterministically.
        for (k, x) in flat.iter().enumerate().step_by(7) {
            let y = flat[(k * 13 + 5) % flat.len()];
            let p = a.multiply_monomials(x, y);
            for m in p.iter() {
                assert!(a.is_normal(m));
            }
        }
    }

    #[test]
    fn p_even_is_even_in_t_over_c() {
        let p = p_even(CoefficientField::C, 40).unwrap();
        let w = DegreeWindow { s: None, t: Some((0, 12)), u: Some((-2, 8)), q: None, stem: None };
        for (d, n) in p.poincare_series(&w).unwrap() {
            if n > 0 && d.u >= 0 {
                // Over C every generator except tau has even t; tau has t = 0.
                assert!(d.t % 2 == 0, "odd-t class in P over C at {d}");
            }
        }
    }
}
