//! Brute-force Ext computation over small motivic Hopf algebroids via the
//! reduced cobar complex.
//!
//! The algebroids handled here are the quotients `E(n) = 𝕄₂[τ₀,…,τ_n]` of
//! the dual motivic Steenrod algebra (all `ξ_i` and all `τ_i` with `i > n`
//! killed) and the smaller coalgebroids `E(Q_n) = 𝕄₂{1, τ_n}` dual to the
//! exterior algebra on one Milnor primitive.  `E(Q_n)` is a quotient
//! *coalgebroid* of `E(n)` — a module-level projection, not a ring quotient —
//! so its structure maps are computed inside `E(n)` and then projected to
//! the monomials supported on `τ_n` alone.  This is what produces the
//! crucial twisted coaction `ψ(τ^{2^n}) = τ^{2^n} ⊗ 1 + ρ^{2^{n+1}-1}
//! τ^{2^n - 2^n} ⊗ τ_n` over base fields where `ρ ≠ 0`.
//!
//! The cobar complex is the standard reduced one: `C^s = 𝕄 ⊗ Γ̄^{⊗s}` with
//! `Γ̄` the positive-degree part (monomials containing at least one retained
//! primitive), basis elements written `m₀[γ₁|…|γ_s]`.  The differential is
//! the mod-2 alternating sum of the right-unit coaction on `m₀` and the
//! reduced diagonals of each `γ_i`; because every retained primitive is
//! genuinely primitive after projection, each diagonal is a subset split of
//! a squarefree monomial and introduces no coefficients.
//!
//! Every bidegree `(t, u)` supports a *complete* finite complex: the
//! positivity of `t - u` on all primitives bounds the cobar length and the
//! coefficient ring contributes at most one monomial per bidegree, so
//! homology computed here needs no edge-of-window caveats.  The price is
//! that basis sizes grow exponentially with the filtration bound when more
//! than one primitive is retained; callers control cost through the window.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::builtin::{m2, CoefficientField};
use crate::algebra::{AlgebraError, AlgebraPresentation, GeneratorInfo, Monomial, Polynomial};
use crate::gf2::{kernel, BitVec, Span};
use crate::grading::{DegreeWindow, MultiDegree};

/// Errors from cobar-complex construction.
#[derive(Debug, thiserror::Error)]
pub enum CobarError {
    /// An underlying presentation operation failed.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A small Hopf algebroid (or quotient coalgebroid) with the data needed to
/// run its cobar complex.
///
/// `ambient` is the presentation of `E(n) = 𝕄[τ₀,…,τ_n]` in which the right
/// unit is evaluated; `retained` lists the primitive generators that survive
/// the projection onto the coalgebroid actually being resolved.  For `E(n)`
/// itself every primitive is retained; for `E(Q_n)` only `τ_n` is.
#[derive(Debug, Clone)]
pub struct HopfAlgebroidData {
    /// Display name, e.g. `E(1)/R` or `E(Q_2)/C`.
    pub name: String,
    /// Base field of the coefficient ring.
    pub field: CoefficientField,
    /// The coefficient ring `𝕄₂` of the base field, `(t, u)`-graded.
    pub coefficients: AlgebraPresentation,
    /// `𝕄₂[τ₀,…,τ_n]` with the square rewrites `τ_i² = ρ τ_{i+1}`.
    pub ambient: AlgebraPresentation,
    /// How many leading generators of `ambient` are primitives.
    n_primitives: usize,
    /// Indices (into `ambient`) of the retained primitives.
    retained: Vec<usize>,
    /// `η_R(τ)` as a polynomial in `ambient`.
    eta_r_tau: Polynomial,
}

/// Degree of the Milnor generator `τ_i`: `(t, u) = (2^{i+1} - 1, 2^i - 1)`.
#[must_use]
pub fn tau_i_degree(i: u32) -> MultiDegree {
    MultiDegree::tu((1 << (i + 1)) - 1, (1 << i) - 1)
}

fn ambient_e_n(n: u32, field: CoefficientField) -> AlgebraPresentation {
    assert!(n <= 5, "tau_{n} degree would overflow the window arithmetic");
    let mut gens = Vec::new();
    for i in 0..=n {
        let name = format!("tau{i}");
        // With rho present the square of tau_i rewrites; the last generator
        // and the rho-free cases are outright nilpotent.
        if field.has_rho() && i < n {
            gens.push(GeneratorInfo::new(&name, tau_i_degree(i)));
        } else {
            gens.push(GeneratorInfo::nilpotent(&name, tau_i_degree(i), 2));
        }
    }
    for g in m2(field).generators.iter() {
        gens.push(g.clone());
    }
    let proto = AlgebraPresentation::new("proto", gens.clone(), vec![], vec![])
        .expect("generator list is valid");
    let mut rewrites = Vec::new();
    if field.has_rho() {
        let rho = if matches!(field, CoefficientField::R) { "rho" } else { "u" };
        for i in 0..n {
            let rhs = proto.polynomial(&[&[(rho, 1), (&format!("tau{}", i + 1), 1)]]);
            rewrites.push((i as usize, rhs));
        }
    }
    AlgebraPresentation::new(&format!("E({n})_{field}"), gens, rewrites, vec![])
        .expect("E(n) presentation is valid")
}

fn build(
    name: String,
    n: u32,
    retained: Vec<usize>,
    field: CoefficientField,
) -> HopfAlgebroidData {
    let coefficients = m2(field);
    let ambient = ambient_e_n(n, field);
    let n_primitives = (n + 1) as usize;
    // The coefficient generators must sit after the primitives, in the same
    // order as in the standalone coefficient presentation.
    for (j, g) in coefficients.generators.iter().enumerate() {
        assert_eq!(ambient.generators[n_primitives + j].name, g.name);
    }
    let eta_r_tau = if field.has_rho() {
        let rho = if matches!(field, CoefficientField::R) { "rho" } else { "u" };
        ambient.polynomial(&[&[("tau", 1)], &[(rho, 1), ("tau0", 1)]])
    } else {
        ambient.polynomial(&[&[("tau", 1)]])
    };
    HopfAlgebroidData { name, field, coefficients, ambient, n_primitives, retained, eta_r_tau }
}

/// The Hopf algebroid `E(n) = 𝕄₂[τ₀,…,τ_n] / (τ_i² = ρ τ_{i+1}, τ_n² = 0)`
/// with `η_R(τ) = τ + ρτ₀` (`ρ` reads as `u` over `F_q` with `q ≡ 3`, and as
/// `0` over `ℂ` and `F_q` with `q ≡ 1`).
#[must_use]
pub fn e_n(n: u32, field: CoefficientField) -> HopfAlgebroidData {
    build(
        format!("E({n})/{}", field.short_name()),
        n,
        (0..=n as usize).collect(),
        field,
    )
}

/// The quotient coalgebroid `E(Q_n) = 𝕄₂{1, τ_n}` of `E(n)`.
///
/// Structure maps are computed in `E(n)` and then projected by killing every
/// monomial involving `τ_0, …, τ_{n-1}`; in particular the projected right
/// unit sends `τ^m` to `τ^m + bit_n(m)·ρ^{2^{n+1}-1} τ^{m-2^n} τ_n`.
#[must_use]
pub fn e_qn(n: u32, field: CoefficientField) -> HopfAlgebroidData {
    build(
        format!("E(Q{n})/{}", field.short_name()),
        n,
        vec![n as usize],
        field,
    )
}

impl HopfAlgebroidData {
    /// Indices (into the ambient presentation) of the retained primitives.
    #[must_use]
    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    /// True if the ambient monomial survives the projection onto the
    /// retained coalgebroid.
    fn survives(&self, m: &Monomial) -> bool {
        (0..self.n_primitives)
            .all(|i| m.exp(i) == 0 || self.retained.contains(&i))
    }

    /// Splits an ambient monomial into its coefficient part (as a monomial
    /// of `self.coefficients`) and its primitive part (ambient indices).
    fn split(&self, m: &Monomial) -> (Monomial, Monomial) {
        let ng = self.coefficients.ngens();
        let mut coeff = Monomial::one(ng);
        let mut prim = Monomial::one(self.ambient.ngens());
        for j in 0..ng {
            coeff = coeff.raw_mul(&Monomial::single(ng, j, m.exp(self.n_primitives + j)));
        }
        for i in 0..self.n_primitives {
            prim = prim.raw_mul(&Monomial::single(self.ambient.ngens(), i, m.exp(i)));
        }
        (coeff, prim)
    }

    /// Lifts a coefficient monomial into the ambient presentation.
    fn lift(&self, m: &Monomial) -> Monomial {
        let mut out = Monomial::one(self.ambient.ngens());
        for j in 0..self.coefficients.ngens() {
            out = out.raw_mul(&Monomial::single(
                self.ambient.ngens(),
                self.n_primitives + j,
                m.exp(j),
            ));
        }
        out
    }

    /// Renders a cobar element as `m₀[γ₁|…|γ_s]`.
    #[must_use]
    pub fn render_elt(&self, e: &CobarElt) -> String {
        let slots: Vec<String> = e.slots.iter().map(|g| self.ambient.label(g)).collect();
        let coeff = if e.coeff.is_one() {
            String::new()
        } else {
            self.coefficients.label(&e.coeff)
        };
        format!("{coeff}[{}]", slots.join("|"))
    }
}

/// A reduced-cobar basis element `m₀[γ₁|…|γ_s]`: a coefficient monomial and
/// a list of nonempty squarefree primitive monomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CobarElt {
    /// Coefficient monomial `m₀`, over the coefficient presentation.
    pub coeff: Monomial,
    /// Bar slots, each an ambient monomial supported on retained primitives.
    pub slots: Vec<Monomial>,
}

/// Scratch state for running one algebroid's cobar complex: memoized right
/// units and coefficient-basis lookups.
pub struct CobarWorkspace<'a> {
    h: &'a HopfAlgebroidData,
    /// `η_R(τ)^a`, extended on demand.
    eta_pows: Vec<Polynomial>,
    /// Coefficient monomial by `(t, u)`, `None` when the degree is empty.
    coeff_cache: HashMap<(i32, i32), Option<Monomial>>,
    /// Nonempty squarefree retained-primitive monomials with their degrees.
    slot_options: Vec<(Monomial, MultiDegree)>,
}

impl<'a> CobarWorkspace<'a> {
    /// Builds a workspace for `h`.
    #[must_use]
    pub fn new(h: &'a HopfAlgebroidData) -> Self {
        let ng = h.ambient.ngens();
        let mut slot_options = Vec::new();
        let k = h.retained.len();
        for mask in 1u32..(1 << k) {
            let mut m = Monomial::one(ng);
            for (bit, &idx) in h.retained.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    m = m.raw_mul(&Monomial::single(ng, idx, 1));
                }
            }
            let d = h.ambient.degree_of(&m).expect("squarefree primitive monomial");
            slot_options.push((m, d));
        }
        CobarWorkspace {
            h,
            eta_pows: vec![Polynomial::from_monomial(Monomial::one(ng))],
            coeff_cache: HashMap::new(),
            slot_options,
        }
    }

    fn eta_tau_pow(&mut self, a: u16) -> Polynomial {
        while self.eta_pows.len() <= a as usize {
            let next = self
                .h
                .ambient
                .multiply(self.eta_pows.last().expect("nonempty"), &self.h.eta_r_tau);
            self.eta_pows.push(next);
        }
        self.eta_pows[a as usize].clone()
    }

    /// The projected right-unit coaction `η_R(m)` of a coefficient monomial,
    /// as a polynomial in the ambient presentation.  Monomials involving
    /// non-retained primitives are dropped (the coalgebroid projection).
    pub fn coaction(&mut self, m: &Monomial) -> Polynomial {
        let tau_idx = self
            .h
            .coefficients
            .gen_index("tau")
            .expect("coefficient ring contains tau");
        let pow = self.eta_tau_pow(m.exp(tau_idx));
        let mut rest = m.clone();
        rest.set_exp(tau_idx, 0);
        let shifted = self
            .h
            .ambient
            .multiply(&pow, &Polynomial::from_monomial(self.h.lift(&rest)));
        let mut out = Polynomial::zero();
        for term in shifted.iter() {
            if self.h.survives(term) {
                out.toggle(term.clone());
            }
        }
        out
    }

    /// The cobar differential of one basis element, as an XOR set of basis
    /// elements.  Degree `(t, u)` is preserved exactly and the slot count
    /// grows by one.
    pub fn differential(&mut self, e: &CobarElt) -> BTreeSet<CobarElt> {
        let mut out: BTreeSet<CobarElt> = BTreeSet::new();
        let mut toggle = |elt: CobarElt| {
            if !out.remove(&elt) {
                out.insert(elt);
            }
        };
        // Right-unit term: insert the reduced coaction of m₀ in front.
        let co = self.coaction(&e.coeff);
        for term in co.iter() {
            let (coeff, prim) = self.h.split(term);
            if prim.is_one() {
                // The primitive-free part of η_R(m₀) is m₀ itself and
                // cancels against the left unit.
                assert_eq!(coeff, e.coeff, "right unit fixes 𝕄 modulo primitives");
                continue;
            }
            let mut slots = Vec::with_capacity(e.slots.len() + 1);
            slots.push(prim);
            slots.extend(e.slots.iter().cloned());
            toggle(CobarElt { coeff, slots });
        }
        // Slot terms: reduced diagonal of each γ_i is the sum over splits of
        // its (squarefree) support into two nonempty halves.
        for (i, gamma) in e.slots.iter().enumerate() {
            let support: Vec<usize> = (0..self.h.ambient.ngens())
                .filter(|&j| gamma.exp(j) > 0)
                .collect();
            debug_assert!(support.iter().all(|&j| gamma.exp(j) == 1));
            let k = support.len();
            let ng = self.h.ambient.ngens();
            for mask in 1u32..((1u32 << k) - 1) {
                let mut left = Monomial::one(ng);
                let mut right = Monomial::one(ng);
                for (bit, &j) in support.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        left = left.raw_mul(&Monomial::single(ng, j, 1));
                    } else {
                        right = right.raw_mul(&Monomial::single(ng, j, 1));
                    }
                }
                let mut slots = e.slots.clone();
                slots.splice(i..=i, [left, right]);
                toggle(CobarElt { coeff: e.coeff.clone(), slots });
            }
        }
        out
    }

    /// The unique coefficient monomial in bidegree `(t, u)`, if any.
    fn coeff_in_degree(&mut self, t: i32, u: i32) -> Result<Option<Monomial>, CobarError> {
        if let Some(hit) = self.coeff_cache.get(&(t, u)) {
            return Ok(hit.clone());
        }
        let basis = self.h.coefficients.basis_in_degree(&MultiDegree::tu(t, u))?;
        assert!(basis.len() <= 1, "coefficient ring has one monomial per bidegree");
        let hit = basis.into_iter().next();
        self.coeff_cache.insert((t, u), hit.clone());
        Ok(hit)
    }

    /// Complete basis of `C^s` in bidegree `(t, u)`, sorted.
    fn basis(&mut self, t: i32, u: i32, s: usize) -> Result<Vec<CobarElt>, CobarError> {
        // Pruning bounds: every slot lowers t - u by at least min_tu and t by
        // at most max_t; the leftover coefficient degree needs t ≤ 0 ≤ t - u.
        let min_tu = self
            .slot_options
            .iter()
            .map(|(_, d)| d.t - d.u)
            .min()
            .unwrap_or(1);
        let max_t = self.slot_options.iter().map(|(_, d)| d.t).max().unwrap_or(0);
        let mut out = Vec::new();
        let mut slots: Vec<Monomial> = Vec::with_capacity(s);
        self.basis_dfs(t, u, s, min_tu, max_t, &mut slots, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn basis_dfs(
        &mut self,
        t_rem: i32,
        u_rem: i32,
        s_rem: usize,
        min_tu: i32,
        max_t: i32,
        slots: &mut Vec<Monomial>,
        out: &mut Vec<CobarElt>,
    ) -> Result<(), CobarError> {
        if s_rem == 0 {
            if let Some(coeff) = self.coeff_in_degree(t_rem, u_rem)? {
                out.push(CobarElt { coeff, slots: clone_slots(slots) });
            }
            return Ok(());
        }
        let rem = s_rem as i32;
        // The coefficient left over at the end satisfies t ≤ 0 and t-u ≥ 0.
        if t_rem - u_rem < rem * min_tu || t_rem > rem * max_t {
            return Ok(());
        }
        let options = self.slot_options.clone();
        for (m, d) in &options {
            slots.push(m.clone());
            self.basis_dfs(t_rem - d.t, u_rem - d.u, s_rem - 1, min_tu, max_t, slots, out)?;
            slots.pop();
        }
        Ok(())
    }
}

fn clone_slots(slots: &[Monomial]) -> Vec<Monomial> {
    slots.to_vec()
}

/// One Ext group: its `F₂`-dimension and a deterministic label per basis
/// vector (echelon pivot of the representative, `+…` marking longer sums).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtGroup {
    /// Dimension over `F₂`.
    pub dim: usize,
    /// One label per homology basis vector.
    pub labels: Vec<String>,
}

/// Ext of the algebroid's trivial comodule on the window: a map from
/// `(s, t, u)` to dimension and labels, with zero groups omitted.
///
/// Each bidegree's complex is complete, so every reported degree is exact;
/// `d² = 0` is asserted during construction.  Cost grows exponentially with
/// the filtration bound when several primitives are retained — callers pick
/// windows accordingly.
pub fn ext_in_window(
    h: &HopfAlgebroidData,
    window: &DegreeWindow,
) -> Result<BTreeMap<MultiDegree, ExtGroup>, CobarError> {
    let (t_lo, t_hi) = window.t.expect("cobar windows bound t");
    let (u_lo, u_hi) = window.u.expect("cobar windows bound u");
    let (s_lo, s_hi) = window.s.expect("cobar windows bound s");
    let s_lo = s_lo.max(0);
    let mut ws = CobarWorkspace::new(h);
    let mut table = BTreeMap::new();
    for t in t_lo..=t_hi {
        // Intersect the filtration range with the stem constraint.
        let (mut a, mut b) = (s_lo, s_hi);
        if let Some((st_lo, st_hi)) = window.stem {
            a = a.max(t - st_hi);
            b = b.min(t - st_lo);
        }
        if a > b {
            continue;
        }
        for u in u_lo..=u_hi {
            ext_at_bidegree(&mut ws, t, u, a as usize, b as usize, &mut table)?;
        }
    }
    Ok(table)
}

/// Homology of the (complete) cobar complex at one `(t, u)`, for filtrations
/// `s_lo..=s_hi`, appended to `table`.
fn ext_at_bidegree(
    ws: &mut CobarWorkspace<'_>,
    t: i32,
    u: i32,
    s_lo: usize,
    s_hi: usize,
    table: &mut BTreeMap<MultiDegree, ExtGroup>,
) -> Result<(), CobarError> {
    // Bases for s_lo-1 ..= s_hi+1 and differentials out of each of them.
    let first = s_lo.saturating_sub(1);
    let mut bases: Vec<Vec<CobarElt>> = Vec::new();
    for s in first..=s_hi + 1 {
        bases.push(ws.basis(t, u, s)?);
    }
    if bases.iter().all(Vec::is_empty) {
        return Ok(());
    }
    let index: Vec<BTreeMap<&CobarElt, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    // maps[k] sends C^{first+k} into C^{first+k+1}.
    let mut maps: Vec<Vec<BitVec>> = Vec::new();
    for k in 0..bases.len() - 1 {
        let target = &index[k + 1];
        let mut rows = Vec::with_capacity(bases[k].len());
        for e in &bases[k] {
            let mut row = BitVec::zeros(bases[k + 1].len());
            for term in ws.differential(e) {
                let j = *target
                    .get(&term)
                    .expect("differential lands in the complete next basis");
                row.flip(j);
            }
            rows.push(row);
        }
        maps.push(rows);
    }
    // d² = 0, asserted on every composable pair.
    for k in 0..maps.len().saturating_sub(1) {
        for row in &maps[k] {
            let mut acc = BitVec::zeros(bases[k + 2].len());
            for j in row.ones() {
                acc.xor_assign(&maps[k + 1][j]);
            }
            assert!(acc.is_zero(), "cobar differential squares to zero");
        }
    }
    for s in s_lo..=s_hi {
        let k = s - first;
        let dim_here = bases[k].len();
        if dim_here == 0 {
            continue;
        }
        let cocycles = if k < maps.len() {
            kernel(&maps[k])
        } else {
            unreachable!("bases extend one step past s_hi")
        };
        let mut span = Span::new();
        if k > 0 {
            for row in &maps[k - 1] {
                span.insert(row);
            }
        }
        let mut labels = Vec::new();
        for z in &cocycles {
            let reduced = span.reduce(z);
            if span.insert(&reduced) {
                let pivot = reduced.lowest_set().expect("nonzero new basis vector");
                let mut label = ws.h.render_elt(&bases[k][pivot]);
                if reduced.count_ones() > 1 {
                    label.push_str("+…");
                }
                labels.push(label);
            }
        }
        if !labels.is_empty() {
            table.insert(
                MultiDegree::stu(s as i32, t, u),
                ExtGroup { dim: labels.len(), labels },
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin::{ext_e0, ext_eqn, ext_kgl};

    fn dims(table: &BTreeMap<MultiDegree, ExtGroup>) -> BTreeMap<MultiDegree, usize> {
        table.iter().map(|(d, g)| (*d, g.dim)).collect()
    }

    fn golden_dims(
        a: &AlgebraPresentation,
        w: &DegreeWindow,
    ) -> BTreeMap<MultiDegree, usize> {
        a.poincare_series(w)
            .expect("windowed enumeration")
            .into_iter()
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    #[test]
    fn coaction_examples() {
        // τ is unhit in E(Q_1) over R: the τ₀-term of η_R dies in projection.
        let hq1 = e_qn(1, CoefficientField::R);
        let mut ws = CobarWorkspace::new(&hq1);
        let tau = hq1.coefficients.monomial(&[("tau", 1)]);
        assert_eq!(ws.coaction(&tau), hq1.ambient.polynomial(&[&[("tau", 1)]]));
        // … while over E(0) it survives: η_R(τ) = τ + ρτ₀.
        let h0 = e_n(0, CoefficientField::R);
        let mut ws0 = CobarWorkspace::new(&h0);
        let tau0 = h0.coefficients.monomial(&[("tau", 1)]);
        assert_eq!(
            ws0.coaction(&tau0),
            h0.ambient.polynomial(&[&[("tau", 1)], &[("rho", 1), ("tau0", 1)]])
        );
        // ρ is a comodule primitive everywhere.
        let rho = h0.coefficients.monomial(&[("rho", 1)]);
        let d = ws0.differential(&CobarElt { coeff: rho, slots: vec![] });
        assert!(d.is_empty());
    }

    #[test]
    fn projected_coaction_closed_form() {
        // Over E(Q_n)/R: d(τ^m) = bit_n(m) · ρ^{2^{n+1}-1} τ^{m-2^n} [τ_n].
        for n in 1u32..=2 {
            let h = e_qn(n, CoefficientField::R);
            let mut ws = CobarWorkspace::new(&h);
            for m in 0u16..=12 {
                let src = CobarElt {
                    coeff: h.coefficients.monomial(&[("tau", m)]),
                    slots: vec![],
                };
                let got = ws.differential(&src);
                if m & (1 << n) == 0 {
                    assert!(got.is_empty(), "n={n}, m={m}");
                } else {
                    let expect = CobarElt {
                        coeff: h.coefficients.monomial(&[
                            ("tau", m - (1 << n)),
                            ("rho", (1 << (n + 1)) - 1),
                        ]),
                        slots: vec![h.ambient.monomial(&[(&format!("tau{n}"), 1)])],
                    };
                    assert_eq!(got.into_iter().collect::<Vec<_>>(), vec![expect], "n={n}, m={m}");
                }
            }
        }
    }

    #[test]
    fn hand_verified_cocycle() {
        // z = τ²[τ₀] + ρ²τ[τ₁] + ρ³[τ₀τ₁] is a cocycle of E(1)/R in degree
        // (s,t,u) = (1,1,-2), and spans that Ext group.
        let h = e_n(1, CoefficientField::R);
        let mut ws = CobarWorkspace::new(&h);
        let terms = [
            CobarElt {
                coeff: h.coefficients.monomial(&[("tau", 2)]),
                slots: vec![h.ambient.monomial(&[("tau0", 1)])],
            },
            CobarElt {
                coeff: h.coefficients.monomial(&[("tau", 1), ("rho", 2)]),
                slots: vec![h.ambient.monomial(&[("tau1", 1)])],
            },
            CobarElt {
                coeff: h.coefficients.monomial(&[("rho", 3)]),
                slots: vec![h.ambient.monomial(&[("tau0", 1), ("tau1", 1)])],
            },
        ];
        let mut image: BTreeSet<CobarElt> = BTreeSet::new();
        for term in &terms {
            assert_eq!(
                h.ambient.degree_of(&h.lift(&term.coeff)).unwrap().t
                    + term.slots.iter().map(|g| h.ambient.degree_of(g).unwrap().t).sum::<i32>(),
                1
            );
            for out in ws.differential(term) {
                if !image.remove(&out) {
                    image.insert(out);
                }
            }
        }
        assert!(image.is_empty(), "d(z) = 0");

        let w = DegreeWindow::from_ranges((0, 1), (-3, 0), (0, 2));
        let table = ext_in_window(&h, &w).unwrap();
        assert_eq!(table[&MultiDegree::stu(1, 1, -2)].dim, 1);
    }

    #[test]
    fn eqn_over_c_is_free_on_tau_and_vn() {
        let golden = AlgebraPresentation::new(
            "F2[tau,v1]",
            vec![
                GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)),
                GeneratorInfo::new("v1", MultiDegree::stu(1, 3, 1)),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let w = DegreeWindow::from_ranges((0, 10), (-6, 6), (0, 5));
        let table = ext_in_window(&e_qn(1, CoefficientField::C), &w).unwrap();
        assert_eq!(dims(&table), golden_dims(&golden, &w));
    }

    #[test]
    fn e0_matches_goldens_over_r_and_fq() {
        let w = DegreeWindow::from_ranges((0, 12), (-8, 8), (0, 8));
        for field in [CoefficientField::R, CoefficientField::Fq(3), CoefficientField::Fq(5)] {
            let table = ext_in_window(&e_n(0, field), &w).unwrap();
            assert_eq!(dims(&table), golden_dims(&ext_e0(field), &w), "{field}");
        }
    }

    #[test]
    fn e1_over_r_matches_kgl_golden() {
        let w = DegreeWindow::from_ranges((0, 10), (-6, 6), (0, 5));
        let table = ext_in_window(&e_n(1, CoefficientField::R), &w).unwrap();
        assert_eq!(dims(&table), golden_dims(&ext_kgl(CoefficientField::R), &w));
    }

    #[test]
    fn eqn_over_r_matches_bit_pattern_golden() {
        let w = DegreeWindow::from_ranges((0, 12), (-8, 8), (0, 6));
        for n in 1u32..=2 {
            let table = ext_in_window(&e_qn(n, CoefficientField::R), &w).unwrap();
            assert_eq!(
                dims(&table),
                golden_dims(&ext_eqn(n, CoefficientField::R), &w),
                "E(Q{n})/R"
            );
        }
    }

    #[test]
    fn eqn_over_fq_is_free_for_n_at_least_one() {
        // The τ₀-term of η_R projects away in E(Q_n), n ≥ 1, so Ext is free
        // over both residue classes of q.
        let golden = AlgebraPresentation::new(
            "F2[tau,v1]<u>",
            vec![
                GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1)),
                GeneratorInfo::nilpotent("u", MultiDegree::stu(0, -1, -1), 2),
                GeneratorInfo::new("v1", MultiDegree::stu(1, 3, 1)),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let w = DegreeWindow::from_ranges((0, 8), (-6, 6), (0, 4));
        for q in [3, 9] {
            let table = ext_in_window(&e_qn(1, CoefficientField::Fq(q)), &w).unwrap();
            assert_eq!(dims(&table), golden_dims(&golden, &w), "q={q}");
        }
    }
}
