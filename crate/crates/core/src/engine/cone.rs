//! The negative-cone module of `C₂`-equivariant Eilenberg–MacLane homotopy
//! with `ℤ/2` coefficients, in the realized slice grading.
//!
//! The cone is the infinitely divisible part spanned by symbols
//! `γ/(ρ^a τ^b)`, together with a polynomial tail generator (`v̄₁` for the
//! connective real K-theory instance).  With `ℤ/2` coefficients only even
//! `τ`-divisibility occurs, so the basis is
//!
//! * `γ/(ρ^a τ^b)` with `b ≥ 2` even and `a ≥ 0`, and
//! * `γ/ρ^a` with `a ≥ 1`;
//!
//! `γ` itself is excluded (it is the unit of the positive part).  In the
//! realized `(s, t, u, q)` grading used by the engine, the element
//! `γ/(ρ^a τ^b)·v̄₁^c` sits in degree `(-a, 2c, 1 + a + b + c, 2c)`.
//!
//! Module actions are atomic: `ρ` lowers `a`, `τ²` lowers `b` (odd `τ`
//! powers annihilate the `ℤ/2` cone), and the tail acts freely.  An action
//! that would produce `γ` itself gives zero.

use crate::grading::{DegreeWindow, MultiDegree};

/// A basis symbol `γ/(ρ^a τ^b) · v̄^c` of the negative cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeElement {
    /// Exponent of `ρ` in the divisor.
    pub a: i32,
    /// Exponent of `τ` in the divisor; always even, `≥ 2` when `a = 0`.
    pub b: i32,
    /// Power of the polynomial tail generator.
    pub c: i32,
}

impl ConeElement {
    /// True for symbols the cone actually contains.
    #[must_use]
    pub fn is_valid(self) -> bool {
        self.a >= 0
            && self.c >= 0
            && self.b >= 0
            && self.b % 2 == 0
            && (self.b >= 2 || self.a >= 1)
    }
}

/// The negative-cone module attached to a realized slice page.
#[derive(Debug, Clone)]
pub struct NegativeConeModule {
    /// Name of the tail generator, e.g. `vbar1`.
    pub tail_name: String,
    /// Degree of the tail generator in `(s, t, u, q)`.
    pub tail_degree: MultiDegree,
}

impl NegativeConeModule {
    /// A cone whose tail is the given polynomial generator.
    #[must_use]
    pub fn new(tail_name: &str, tail_degree: MultiDegree) -> Self {
        NegativeConeModule { tail_name: tail_name.to_owned(), tail_degree }
    }

    /// Degree of a basis symbol: `(-a, 2c, 1 + a + b + c, 2c)` for the
    /// standard `v̄₁` tail, computed from the tail degree in general.
    #[must_use]
    pub fn degree(&self, e: &ConeElement) -> MultiDegree {
        debug_assert!(e.is_valid());
        let tail = self.tail_degree.scale(e.c);
        MultiDegree {
            s: Some(-e.a + tail.s.unwrap_or(0)),
            t: tail.t,
            u: 1 + e.a + e.b + tail.u,
            q: Some(tail.q.unwrap_or(0)),
        }
    }

    /// All basis symbols whose degree lies in the window.
    #[must_use]
    pub fn basis_in_window(&self, w: &DegreeWindow) -> Vec<ConeElement> {
        let (s_lo, _) = w.s.expect("cone windows bound s");
        let (_, u_hi) = w.u.expect("cone windows bound u");
        let (_, t_hi) = w.t.expect("cone windows bound t");
        let mut out = Vec::new();
        let a_max = (-s_lo).max(0);
        let c_max = if self.tail_degree.t > 0 { t_hi.max(0) / self.tail_degree.t } else { 0 };
        for a in 0..=a_max {
            for c in 0..=c_max {
                // u = 1 + a + b + c·u_tail grows with b; stop at the window lid.
                let mut b = 0;
                loop {
                    let e = ConeElement { a, b, c };
                    if 1 + a + b + c * self.tail_degree.u > u_hi {
                        break;
                    }
                    if e.is_valid() && w.contains(&self.degree(&e)) {
                        out.push(e);
                    }
                    b += 2;
                }
            }
        }
        out.sort();
        out
    }

    /// Action of `ρ`: lowers the divisor power, annihilating at the edge.
    #[must_use]
    pub fn act_rho(&self, e: &ConeElement) -> Option<ConeElement> {
        let out = ConeElement { a: e.a - 1, ..*e };
        out.is_valid().then_some(out)
    }

    /// Action of `τ²` (the atomic even step; odd `τ` powers act by zero).
    #[must_use]
    pub fn act_tau_sq(&self, e: &ConeElement) -> Option<ConeElement> {
        let out = ConeElement { b: e.b - 2, ..*e };
        out.is_valid().then_some(out)
    }

    /// Action of the tail generator.
    #[must_use]
    pub fn act_tail(&self, e: &ConeElement) -> ConeElement {
        ConeElement { c: e.c + 1, ..*e }
    }

    /// Renders a symbol, e.g. `g/(rho^3*tau^2)*vbar1`.
    #[must_use]
    pub fn label(&self, e: &ConeElement) -> String {
        let mut divisor = Vec::new();
        if e.a == 1 {
            divisor.push("rho".to_owned());
        } else if e.a > 1 {
            divisor.push(format!("rho^{}", e.a));
        }
        if e.b == 1 {
            divisor.push("tau".to_owned());
        } else if e.b > 1 {
            divisor.push(format!("tau^{}", e.b));
        }
        let mut out = format!("g/({})", divisor.join("*"));
        if e.c == 1 {
            out.push_str(&format!("*{}", self.tail_name));
        } else if e.c > 1 {
            out.push_str(&format!("*{}^{}", self.tail_name, e.c));
        }
        out
    }
}

/// A one-parameter staggered family of differentials on cone symbols:
/// sources are the symbols with `b = src_b` and `a ≥ src_a_min`, and
///
/// `d(γ/(ρ^a τ^{src_b}) v̄^c) = γ/(ρ^{a-shift_a} τ^{to_b}) v̄^{c+1}`.
///
/// Symbols with other divisor shapes are permanent cycles for the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeRuleFamily {
    /// Page on which the family acts.
    pub page: i32,
    /// Minimal `ρ`-divisor exponent of a source.
    pub src_a_min: i32,
    /// Exact `τ`-divisor exponent of a source.
    pub src_b: i32,
    /// How much the `ρ`-divisor exponent drops.
    pub shift_a: i32,
    /// `τ`-divisor exponent of the target.
    pub to_b: i32,
    /// Provenance note for reports.
    pub origin: String,
}

impl ConeRuleFamily {
    /// The differential of a symbol under this family, if the symbol is a
    /// source.
    #[must_use]
    pub fn apply(&self, e: &ConeElement) -> Option<ConeElement> {
        if e.b == self.src_b && e.a >= self.src_a_min {
            let out = ConeElement { a: e.a - self.shift_a, b: self.to_b, c: e.c + 1 };
            debug_assert!(out.is_valid());
            Some(out)
        } else {
            None
        }
    }
}

/// Derives the cone differential family forced by the positive-part rule
/// `d(τ²) = ρ³·tail` together with `τ²`-linearity, and returns it with the
/// anchor identity `(source, target)` that pins it down.
///
/// The derivation: `x₀ = γ/(ρ³τ²)` satisfies `τ²·x₀ = γ/ρ³`, which is a
/// `ρ`-multiple of permanent cycles only, so `0 = d(τ²·x₀) = ρ³·tail·x₀ +
/// τ²·d(x₀)`.  The right-hand product `ρ³·tail·x₀ = (γ/τ²)·tail` has a
/// unique `τ²`-preimage in the cone, namely `(γ/τ⁴)·tail`, which therefore
/// equals `d(x₀)`.  The family extends this along `ρ`-divisibility and tail
/// multiplication, staggered so that only `b = 2` symbols support sources.
#[must_use]
pub fn derive_cone_rule(
    cone: &NegativeConeModule,
    page: i32,
    origin: &str,
) -> (ConeElement, ConeElement, ConeRuleFamily) {
    let x0 = ConeElement { a: 3, b: 2, c: 0 };
    assert!(x0.is_valid());
    // ρ³ · tail · x₀ — the positive-rule side of the Leibniz identity.
    let mut rhs = x0;
    for _ in 0..3 {
        rhs = cone.act_rho(&rhs).expect("rho-divisible source");
    }
    let rhs = cone.act_tail(&rhs);
    // Unique τ²-preimage: scan divisor shapes in a generous range.
    let mut preimages = Vec::new();
    for a in 0..=8 {
        for b in (0..=12).step_by(2) {
            let z = ConeElement { a, b, c: rhs.c };
            if z.is_valid() && cone.act_tau_sq(&z) == Some(rhs) {
                preimages.push(z);
            }
        }
    }
    assert_eq!(preimages.len(), 1, "τ²-preimage of {} is unique", cone.label(&rhs));
    let z = preimages[0];
    let family = ConeRuleFamily {
        page,
        src_a_min: x0.a,
        src_b: x0.b,
        shift_a: x0.a - z.a,
        to_b: z.b,
        origin: origin.to_owned(),
    };
    assert_eq!(family.apply(&x0), Some(z));
    (x0, z, family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn krr_cone() -> NegativeConeModule {
        NegativeConeModule::new("vbar1", MultiDegree::qstu(2, 0, 2, 1))
    }

    #[test]
    fn degrees_and_validity() {
        let cone = krr_cone();
        // γ/(ρ³τ²): (s,t,u,q) = (-3, 0, 6, 0).
        assert_eq!(
            cone.degree(&ConeElement { a: 3, b: 2, c: 0 }),
            MultiDegree::qstu(0, -3, 0, 6)
        );
        // The tail shifts by (0, 2, 1, 2) per power.
        assert_eq!(
            cone.degree(&ConeElement { a: 3, b: 2, c: 2 }),
            MultiDegree::qstu(4, -3, 4, 8)
        );
        assert!(!ConeElement { a: 0, b: 0, c: 0 }.is_valid(), "γ itself is excluded");
        assert!(!ConeElement { a: 0, b: 1, c: 0 }.is_valid(), "odd τ-divisors excluded");
        assert!(ConeElement { a: 1, b: 0, c: 0 }.is_valid());
    }

    #[test]
    fn actions_respect_the_boundary_of_the_law() {
        let cone = krr_cone();
        // ρ · γ/τ² = 0: the ρ-divisor is already trivial.
        assert_eq!(cone.act_rho(&ConeElement { a: 0, b: 2, c: 0 }), None);
        // τ² · γ/(ρ³τ²) = γ/ρ³.
        assert_eq!(
            cone.act_tau_sq(&ConeElement { a: 3, b: 2, c: 0 }),
            Some(ConeElement { a: 3, b: 0, c: 0 })
        );
        // τ² · γ/τ² would be γ itself — zero.
        assert_eq!(cone.act_tau_sq(&ConeElement { a: 0, b: 2, c: 0 }), None);
        // ρ · γ/ρ would be γ itself — zero.
        assert_eq!(cone.act_rho(&ConeElement { a: 1, b: 0, c: 0 }), None);
    }

    #[test]
    fn derived_rule_matches_the_leibniz_anchor() {
        let cone = krr_cone();
        let (x0, z, family) = derive_cone_rule(&cone, 3, "derived");
        assert_eq!(x0, ConeElement { a: 3, b: 2, c: 0 });
        assert_eq!(z, ConeElement { a: 0, b: 4, c: 1 });
        // Degree shift of the family is the page-3 realized shift (3,2,0,2).
        let shift = cone.degree(&z).sub(&cone.degree(&x0)).unwrap();
        assert_eq!(shift, MultiDegree::qstu(2, 3, 2, 0));
        // Staggering: targets have b = 4 ≠ 2, so the family squares to zero.
        for a in 0..6 {
            for c in 0..3 {
                let e = ConeElement { a, b: 2, c };
                if let Some(t) = family.apply(&e) {
                    assert_eq!(family.apply(&t), None);
                }
            }
        }
    }

    #[test]
    fn window_basis_is_exactly_the_valid_grid() {
        let cone = krr_cone();
        let mut w = DegreeWindow::from_ranges((-6, 6), (0, 8), (-4, 0));
        w.q = Some((0, 8));
        let basis = cone.basis_in_window(&w);
        assert!(!basis.is_empty());
        for e in &basis {
            assert!(e.is_valid());
            assert!(w.contains(&cone.degree(e)));
        }
        // Completeness spot check: γ/(ρ²τ²) has degree (-2, 0, 5, 0).
        assert!(basis.contains(&ConeElement { a: 2, b: 2, c: 0 }));
        // Determinism.
        assert_eq!(basis, cone.basis_in_window(&w));
    }
}
