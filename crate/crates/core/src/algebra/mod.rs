//! Finitely presented graded-commutative GF(2) algebras.
//!
//! A presentation ([`AlgebraPresentation`]) consists of an ordered list of
//! generators with multidegrees, *square rewrites* `x² = P` where `P` only
//! involves strictly later generators, and *truncations* — monomials declared
//! equal to zero, tested by divisibility.  Nilpotence `x^e = 0` is recorded on
//! the generator and materialized as the truncation `x^e`.
//!
//! This shape covers every coefficient ring, Ext ring, per-slice ring, and
//! page algebra in the crate: polynomial and exterior generators, truncated
//! polynomial rings such as `F₂[τ,u]/u²`, and quadratic extensions such as
//! `A//E(m)` (where `τ̄ᵢ² = τ·ξ̄ᵢ₊₁ + ρ·τ̄ᵢ₊₁` rewrites into later
//! generators).
//!
//! *Normal form.*  A monomial is normal when no truncation divides it and
//! every rewritten generator appears with exponent ≤ 1.  [`AlgebraPresentation::normal_form`]
//! rewrites an arbitrary exponent vector into a GF(2) sum of normal
//! monomials; it terminates because every rewrite strictly decreases the
//! exponents at the earliest non-normal generator, and it is confluent
//! because rewrite right-hand sides only involve later generators.
//!
//! *Windowed enumeration.*  Bases are enumerated degree by degree.  To make
//! enumeration in a window provably finite the presentation must admit a
//! linear functional `φ = a·t + b·u` that is strictly positive on every
//! generator degree; [`AlgebraPresentation::phi`] finds one (preferring the
//! canonical `(2, −3)`), and the depth-first enumeration prunes on the
//! remaining `φ` budget.  If no such functional exists the basis really can
//! be infinite in a single degree and enumeration is refused.

pub mod builtin;
pub mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::grading::{DegreeWindow, GradingError, MultiDegree};

/// Errors raised while building or using a presentation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Generator names must be unique.
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    /// All generators must carry the same grading axes.
    #[error("generator `{0}` has a different axis shape than the first generator")]
    ShapeMismatch(String),
    /// A rewrite must target strictly later generators.
    #[error("rewrite for `{gen}` mentions `{offender}`, which does not come later")]
    RewriteNotLater {
        /// Generator being rewritten.
        gen: String,
        /// Offending generator appearing in the right-hand side.
        offender: String,
    },
    /// A rewrite must be degree-homogeneous.
    #[error("rewrite for `{gen}` is not homogeneous: {lhs} vs {rhs}")]
    InhomogeneousRewrite {
        /// Generator being rewritten.
        gen: String,
        /// Degree of the square.
        lhs: MultiDegree,
        /// Degree of an offending right-hand-side monomial.
        rhs: MultiDegree,
    },
    /// Nilpotence exponents must be at least 2.
    #[error("generator `{0}` declares nilpotence < 2")]
    BadNilpotence(String),
    /// No positive linear functional exists on the generator degrees.
    #[error("basis enumeration cannot be certified finite for `{0}`: no positive functional a*t+b*u on the generators")]
    EnumerationNotFinite(String),
    /// Window enumeration requires bounded `t` and `u` ranges.
    #[error("window enumeration requires closed t and u ranges")]
    WindowUnbounded,
    /// Degree arithmetic failed (mixed axis shapes).
    #[error(transparent)]
    Grading(#[from] GradingError),
    /// Text-format parse error.
    #[error("parse error at line {line}: {msg}")]
    Parse {
        /// 1-based line number.
        line: usize,
        /// Description.
        msg: String,
    },
}

/// One generator of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    /// Canonical name, e.g. `tau`, `rho`, `v1`, `xibar2`.
    pub name: String,
    /// Multidegree of the generator.
    pub degree: MultiDegree,
    /// Smallest `e` with `x^e = 0`, if the generator is nilpotent.
    pub nilpotence: Option<u32>,
    /// Alternative display name (e.g. `h0` for `v0` in Adams charts,
    /// `a_sigma` for `rho` in equivariant charts).
    pub alias: Option<String>,
}

impl GeneratorInfo {
    /// A non-nilpotent generator without alias.
    #[must_use]
    pub fn new(name: &str, degree: MultiDegree) -> Self {
        GeneratorInfo { name: name.to_owned(), degree, nilpotence: None, alias: None }
    }

    /// A nilpotent generator (`x^e = 0`).
    #[must_use]
    pub fn nilpotent(name: &str, degree: MultiDegree, e: u32) -> Self {
        GeneratorInfo { name: name.to_owned(), degree, nilpotence: Some(e), alias: None }
    }

    /// Attaches an alias.
    #[must_use]
    pub fn with_alias(mut self, alias: &str) -> Self {
        self.alias = Some(alias.to_owned());
        self
    }
}

/// A commutative monomial: one exponent per generator of its presentation.
///
/// Monomials order lexicographically on the exponent vector, which is the
/// deterministic tiebreak used everywhere (bases, pivots, labels).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Exponents, indexed like `AlgebraPresentation::generators`.
    pub exps: Vec<u16>,
}

impl Monomial {
    /// The unit monomial for an algebra with `n` generators.
    #[must_use]
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// True when every exponent vanishes.
    #[must_use]
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True when `self` divides `other` componentwise.
    #[must_use]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Componentwise sum of exponents (raw product, not normalized).
    #[must_use]
    pub fn raw_mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial { exps }
    }

    /// Exponent of generator `i`.
    #[must_use]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    /// The monomial `x_i^e` in an algebra with `n` generators.
    #[must_use]
    pub fn single(n: usize, i: usize, e: u16) -> Self {
        let mut m = Monomial::one(n);
        m.exps[i] = e;
        m
    }

    /// Overwrites the exponent of generator `i`.
    pub fn set_exp(&mut self, i: usize, e: u16) {
        self.exps[i] = e;
    }
}

/// A GF(2) sum of monomials.  Addition is symmetric difference.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: std::collections::BTreeSet<Monomial>,
}

impl Polynomial {
    /// The zero polynomial.
    #[must_use]
    pub fn zero() -> Self {
        Polynomial::default()
    }

    /// A polynomial with a single term.
    #[must_use]
    pub fn from_monomial(m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.toggle(m);
        p
    }

    /// Adds (XORs) one monomial.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Adds (XORs) another polynomial.
    pub fn add_assign(&mut self, other: &Polynomial) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    /// True when there are no terms.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms (clippy convention).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates terms in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    /// The unique term, if the polynomial is a monomial.
    #[must_use]
    pub fn as_monomial(&self) -> Option<&Monomial> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }
}

impl FromIterator<Monomial> for Polynomial {
    fn from_iter<T: IntoIterator<Item = Monomial>>(iter: T) -> Self {
        let mut p = Polynomial::zero();
        for m in iter {
            p.toggle(m);
        }
        p
    }
}

/// A finitely presented graded-commutative GF(2) algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    /// Display name of the algebra.
    pub name: String,
    /// Ordered generators.
    pub generators: Vec<GeneratorInfo>,
    /// Square rewrites `xᵢ² = P`, with `P` in strictly later generators.
    pub rewrites: BTreeMap<usize, Polynomial>,
    /// Monomials equal to zero (by divisibility).  Includes materialized
    /// nilpotence relations.
    pub truncations: Vec<Monomial>,
    /// Modeling caveats that should surface in reports (e.g. reusing
    /// characteristic-0 relations over a finite field, or basis-only models).
    pub notes: Vec<String>,
    /// Cached positive functional coefficients `(a, b)` with
    /// `a·t + b·u > 0` on every generator, if one exists.
    phi_coeffs: Option<(i32, i32)>,
    /// Zero degree with the axis shape shared by all generators.
    zero_degree: MultiDegree,
}

impl AlgebraPresentation {
    /// Validates and builds a presentation.
    pub fn new(
        name: &str,
        generators: Vec<GeneratorInfo>,
        rewrites: Vec<(usize, Polynomial)>,
        truncations: Vec<Monomial>,
    ) -> Result<Self, AlgebraError> {
        let zero_degree = generators
            .first()
            .map_or(MultiDegree::tu(0, 0), |g| g.degree.zero_like());
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
            if !g.degree.same_shape(&zero_degree) {
                return Err(AlgebraError::ShapeMismatch(g.name.clone()));
            }
            if let Some(e) = g.nilpotence {
                if e < 2 {
                    return Err(AlgebraError::BadNilpotence(g.name.clone()));
                }
            }
        }
        let mut truncations = truncations;
        for (i, g) in generators.iter().enumerate() {
            if let Some(e) = g.nilpotence {
                let mut m = Monomial::one(generators.len());
                m.exps[i] = u16::try_from(e).expect("nilpotence fits in u16");
                truncations.push(m);
            }
        }
        truncations.sort();
        truncations.dedup();

        let mut alg = AlgebraPresentation {
            name: name.to_owned(),
            generators,
            rewrites: BTreeMap::new(),
            truncations,
            notes: Vec::new(),
            phi_coeffs: None,
            zero_degree,
        };
        for (i, p) in rewrites {
            let gen = &alg.generators[i];
            let lhs = gen.degree.scale(2);
            for m in p.iter() {
                for (j, &e) in m.exps.iter().enumerate() {
                    if e > 0 && j <= i {
                        return Err(AlgebraError::RewriteNotLater {
                            gen: gen.name.clone(),
                            offender: alg.generators[j].name.clone(),
                        });
                    }
                }
                let rhs = alg.degree_of(m)?;
                if rhs != lhs {
                    return Err(AlgebraError::InhomogeneousRewrite {
                        gen: gen.name.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
            alg.rewrites.insert(i, p);
        }
        alg.phi_coeffs = alg.search_phi();
        Ok(alg)
    }

    /// Appends a modeling note.
    pub fn push_note(&mut self, note: &str) {
        self.notes.push(note.to_owned());
    }

    /// Number of generators.
    #[must_use]
    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    /// Index of a generator by name.
    #[must_use]
    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Builds a monomial from `(generator name, exponent)` pairs.
    ///
    /// Panics on unknown names: builders construct monomials from their own
    /// generator tables, so an unknown name is a programming error.
    #[must_use]
    pub fn monomial(&self, parts: &[(&str, u16)]) -> Monomial {
        let mut m = Monomial::one(self.ngens());
        for (name, e) in parts {
            let i = self
                .gen_index(name)
                .unwrap_or_else(|| panic!("unknown generator `{name}` in `{}`", self.name));
            m.exps[i] += e;
        }
        m
    }

    /// Polynomial from a list of monomial part-lists.
    #[must_use]
    pub fn polynomial(&self, monos: &[&[(&str, u16)]]) -> Polynomial {
        monos.iter().map(|parts| self.monomial(parts)).collect()
    }

    /// Degree of a raw monomial.
    pub fn degree_of(&self, m: &Monomial) -> Result<MultiDegree, AlgebraError> {
        let mut d = self.zero_degree;
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                d = d.add(&self.generators[i].degree.scale(i32::from(e)))?;
            }
        }
        Ok(d)
    }

    /// True when some truncation divides `m`.
    #[must_use]
    pub fn is_truncated(&self, m: &Monomial) -> bool {
        self.truncations.iter().any(|t| t.divides(m))
    }

    /// True when `m` is a normal-form basis monomial.
    #[must_use]
    pub fn is_normal(&self, m: &Monomial) -> bool {
        if self.is_truncated(m) {
            return false;
        }
        self.rewrites.keys().all(|&i| m.exps[i] <= 1)
    }

    /// Rewrites a raw monomial into a GF(2) sum of normal monomials.
    #[must_use]
    pub fn normal_form(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        let mut stack = vec![m.clone()];
        while let Some(cur) = stack.pop() {
            if self.is_truncated(&cur) {
                continue;
            }
            match self.rewrites.iter().find(|(&i, _)| cur.exps[i] >= 2) {
                None => out.toggle(cur),
                Some((&i, rhs)) => {
                    let mut base = cur;
                    base.exps[i] -= 2;
                    for r in rhs.iter() {
                        stack.push(base.raw_mul(r));
                    }
                }
            }
        }
        out
    }

    /// Normalized product of two monomials.
    #[must_use]
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Polynomial {
        self.normal_form(&a.raw_mul(b))
    }

    /// Normalized product of two polynomials.
    #[must_use]
    pub fn multiply(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in p.iter() {
            for b in q.iter() {
                out.add_assign(&self.multiply_monomials(a, b));
            }
        }
        out
    }

    /// Normalizes every term of a polynomial.
    #[must_use]
    pub fn normalize(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for m in p.iter() {
            out.add_assign(&self.normal_form(m));
        }
        out
    }

    fn search_phi(&self) -> Option<(i32, i32)> {
        let positive = |a: i32, b: i32| {
            self.generators
                .iter()
                .all(|g| a * g.degree.t + b * g.degree.u > 0)
        };
        if self.generators.is_empty() || positive(2, -3) {
            return Some((2, -3));
        }
        let mut candidates: Vec<(i32, i32)> = Vec::new();
        for a in -8..=8 {
            for b in -8..=8 {
                candidates.push((a, b));
            }
        }
        candidates.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a, b));
        candidates.into_iter().find(|&(a, b)| positive(a, b))
    }

    /// The positive functional `(a, b)` used for finiteness certificates.
    pub fn phi(&self) -> Result<(i32, i32), AlgebraError> {
        self.phi_coeffs
            .ok_or_else(|| AlgebraError::EnumerationNotFinite(self.name.clone()))
    }

    /// Evaluates the functional on a degree.
    pub fn phi_value(&self, d: &MultiDegree) -> Result<i32, AlgebraError> {
        let (a, b) = self.phi()?;
        Ok(a * d.t + b * d.u)
    }

    /// Largest value of the functional over a window's `(t, u)` box.
    pub fn phi_max(&self, window: &DegreeWindow) -> Result<i32, AlgebraError> {
        let (a, b) = self.phi()?;
        let (tlo, thi) = window.t.ok_or(AlgebraError::WindowUnbounded)?;
        let (ulo, uhi) = window.u.ok_or(AlgebraError::WindowUnbounded)?;
        let ta = if a >= 0 { a * thi } else { a * tlo };
        let ub = if b >= 0 { b * uhi } else { b * ulo };
        Ok(ta + ub)
    }

    fn exponent_cap(&self, i: usize) -> u16 {
        if self.rewrites.contains_key(&i) {
            1
        } else if let Some(e) = self.generators[i].nilpotence {
            u16::try_from(e - 1).unwrap_or(u16::MAX)
        } else {
            u16::MAX
        }
    }

    /// All normal monomials of exact degree `d`, in lexicographic order.
    pub fn basis_in_degree(&self, d: &MultiDegree) -> Result<Vec<Monomial>, AlgebraError> {
        let budget = self.phi_value(d)?;
        if budget < 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.ngens()];
        self.enumerate(0, *d, budget, &mut exps, &mut |exps, rem| {
            if rem == self.zero_degree {
                let m = Monomial { exps: exps.to_vec() };
                if !self.is_truncated(&m) {
                    out.push(m);
                }
            }
        })?;
        out.sort();
        Ok(out)
    }

    /// All normal monomials whose degree lies in the window, grouped by
    /// degree.  Requires closed `t` and `u` ranges on the window.
    pub fn basis_in_window(
        &self,
        window: &DegreeWindow,
    ) -> Result<BTreeMap<MultiDegree, Vec<Monomial>>, AlgebraError> {
        let budget = self.phi_max(window)?.max(0);
        let mut out: BTreeMap<MultiDegree, Vec<Monomial>> = BTreeMap::new();
        let mut exps = vec![0u16; self.ngens()];
        self.enumerate_window(0, self.zero_degree, budget, window, &mut exps, &mut out)?;
        for v in out.values_mut() {
            v.sort();
        }
        Ok(out)
    }

    // Exact-degree DFS: `rem` is the degree still to be realized by
    // generators `i..`, `budget` the remaining functional value.
    fn enumerate(
        &self,
        i: usize,
        rem: MultiDegree,
        budget: i32,
        exps: &mut Vec<u16>,
        accept: &mut impl FnMut(&[u16], MultiDegree),
    ) -> Result<(), AlgebraError> {
        if i == self.ngens() {
            accept(exps, rem);
            return Ok(());
        }
        let g = &self.generators[i];
        let phi_g = self.phi_value(&g.degree)?;
        let cap = self.exponent_cap(i);
        let max_e = (budget / phi_g).min(i32::from(cap)).max(0);
        let mut cur = rem;
        for e in 0..=max_e {
            if e > 0 {
                cur = cur.sub(&g.degree)?;
            }
            exps[i] = u16::try_from(e).expect("exponent bounded");
            self.enumerate(i + 1, cur, budget - e * phi_g, exps, accept)?;
        }
        exps[i] = 0;
        Ok(())
    }

    // Window DFS: `acc` is the degree accumulated so far.
    fn enumerate_window(
        &self,
        i: usize,
        acc: MultiDegree,
        budget: i32,
        window: &DegreeWindow,
        exps: &mut Vec<u16>,
        out: &mut BTreeMap<MultiDegree, Vec<Monomial>>,
    ) -> Result<(), AlgebraError> {
        if i == self.ngens() {
            if window.contains(&acc) {
                let m = Monomial { exps: exps.clone() };
                if !self.is_truncated(&m) {
                    out.entry(acc).or_default().push(m);
                }
            }
            return Ok(());
        }
        let g = &self.generators[i];
        let phi_g = self.phi_value(&g.degree)?;
        let cap = self.exponent_cap(i);
        let max_e = (budget / phi_g).min(i32::from(cap)).max(0);
        let mut cur = acc;
        for e in 0..=max_e {
            if e > 0 {
                cur = cur.add(&g.degree)?;
            }
            exps[i] = u16::try_from(e).expect("exponent bounded");
            self.enumerate_window(i + 1, cur, budget - e * phi_g, window, exps, out)?;
        }
        exps[i] = 0;
        Ok(())
    }

    /// Dimension of each window degree (the Poincaré series on the window).
    pub fn poincare_series(
        &self,
        window: &DegreeWindow,
    ) -> Result<BTreeMap<MultiDegree, usize>, AlgebraError> {
        Ok(self
            .basis_in_window(window)?
            .into_iter()
            .map(|(d, b)| (d, b.len()))
            .collect())
    }

    /// Canonical label of a monomial, e.g. `tau^2*v1`.
    #[must_use]
    pub fn label(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_owned();
        }
        let mut s = String::new();
        for (i, &e) in m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&self.generators[i].name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Canonical rendering of a polynomial, e.g. `tau^2*v1 + rho^3`.
    #[must_use]
    pub fn render(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_owned();
        }
        p.iter().map(|m| self.label(m)).collect::<Vec<_>>().join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::builtin;
    use super::*;
    use crate::grading::DegreeWindow;

    #[test]
    fn normal_form_rewrite_example() {
        // A//E(0) over R: taubar1^2 -> tau*xibar2 + rho*taubar2.
        let a = builtin::a_mod_e(0, builtin::CoefficientField::R, 40).unwrap();
        let m = a.monomial(&[("taubar1", 2)]);
        let nf = a.normal_form(&m);
        let expected = a.polynomial(&[
            &[("tau", 1), ("xibar2", 1)],
            &[("rho", 1), ("taubar2", 1)],
        ]);
        assert_eq!(nf, expected);
    }

    #[test]
    fn truncation_kills_u_square() {
        let m2 = builtin::m2(builtin::CoefficientField::Fq(5));
        let u2 = m2.monomial(&[("u", 2)]);
        assert!(m2.normal_form(&u2).is_zero());
    }

    #[test]
    fn frobenius_on_sums() {
        // (tau + rho)^2 = tau^2 + rho^2 over GF(2).
        let m2 = builtin::m2(builtin::CoefficientField::R);
        let p = m2.polynomial(&[&[("tau", 1)], &[("rho", 1)]]);
        let sq = m2.multiply(&p, &p);
        let expected = m2.polynomial(&[&[("tau", 2)], &[("rho", 2)]]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn golden_truncation_rho_v0() {
        let e0 = builtin::ext_e0(builtin::CoefficientField::R);
        let m = e0.monomial(&[("rho", 1), ("v0", 1)]);
        assert!(e0.normal_form(&m).is_zero());
    }

    #[test]
    fn coefficient_bases_in_single_degrees() {
        let mr = builtin::m2(builtin::CoefficientField::R);
        let b = mr.basis_in_degree(&MultiDegree::tu(-2, -3)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(mr.label(&b[0]), "tau*rho^2");

        let mc = builtin::m2(builtin::CoefficientField::C);
        let b = mc.basis_in_degree(&MultiDegree::tu(0, -5)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(mc.label(&b[0]), "tau^5");
    }

    #[test]
    fn kgl_golden_v1_degree() {
        let kgl = builtin::ext_kgl(builtin::CoefficientField::R);
        let b = kgl.basis_in_degree(&MultiDegree::stu(1, 3, 1)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(kgl.label(&b[0]), "v1");
        // The correction class [tau^2 v0] is present at (1, 1, -2).
        let b = kgl.basis_in_degree(&MultiDegree::stu(1, 1, -2)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(kgl.label(&b[0]), "w");
    }

    #[test]
    fn free_polynomial_dimension() {
        // F2[tau, v1] has exactly v1^2 in (s,t,u) = (2,6,2).
        let p = builtin::ext_eqn(1, builtin::CoefficientField::C);
        let b = p.basis_in_degree(&MultiDegree::stu(2, 6, 2)).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn normal_form_idempotent_on_products() {
        let a = builtin::a_mod_e(0, builtin::CoefficientField::R, 30).unwrap();
        let x = a.monomial(&[("taubar1", 1), ("xibar1", 1)]);
        let y = a.monomial(&[("taubar1", 1), ("tau", 1)]);
        let p = a.multiply_monomials(&x, &y);
        // Every term of a normalized product is already normal.
        for m in p.iter() {
            assert!(a.is_normal(m));
            assert_eq!(a.normal_form(m), Polynomial::from_monomial(m.clone()));
        }
        // Homogeneity: all terms share one degree.
        let d0 = a.degree_of(p.iter().next().unwrap()).unwrap();
        for m in p.iter() {
            assert_eq!(a.degree_of(m).unwrap(), d0);
        }
    }

    #[test]
    fn window_enumeration_matches_degreewise() {
        let e0 = builtin::ext_e0(builtin::CoefficientField::R);
        let w = DegreeWindow::from_ranges((0, 8), (-4, 4), (0, 6));
        let by_window = e0.basis_in_window(&w).unwrap();
        for (d, basis) in &by_window {
            assert_eq!(&e0.basis_in_degree(d).unwrap(), basis, "degree {d}");
        }
        // Spot totals: no duplicates, nothing outside the window.
        for (d, basis) in &by_window {
            assert!(w.contains(d));
            let mut sorted = basis.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), basis.len());
        }
    }

    #[test]
    fn a_mod_e0_matches_independent_count() {
        // Independent counting model for A//E(0) over R in low stems:
        // monomials tau^a rho^b * (squarefree taubars) * (free xibars),
        // counted by brute-force convolution, never calling basis_in_window.
        let budget = 26;
        let a = builtin::a_mod_e(0, builtin::CoefficientField::R, budget).unwrap();
        let w = DegreeWindow { s: None, t: Some((0, 10)), u: Some((-2, 8)), q: None, stem: None };
        let dims = a.poincare_series(&w).unwrap();

        // Brute force: generators with their (t, u), taubar_i capped at 1.
        let mut gens: Vec<(i32, i32, u16)> = vec![(0, -1, u16::MAX), (-1, -1, u16::MAX)];
        for i in 1..=4i32 {
            gens.push(((1 << (i + 1)) - 1, (1 << i) - 1, 1)); // taubar_i
        }
        for i in 1..=4i32 {
            gens.push(((1 << (i + 1)) - 2, (1 << i) - 1, u16::MAX)); // xibar_i
        }
        let mut counts: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        // Depth-first over exponents with hard (t,u) box pruning.
        fn rec(
            gens: &[(i32, i32, u16)],
            i: usize,
            t: i32,
            u: i32,
            counts: &mut BTreeMap<(i32, i32), usize>,
        ) {
            if t > 64 || u > 40 || u < -40 {
                return;
            }
            if i == gens.len() {
                *counts.entry((t, u)).or_default() += 1;
                return;
            }
            let (gt, gu, cap) = gens[i];
            let mut e = 0u16;
            loop {
                let (nt, nu) = (t + gt * i32::from(e), u + gu * i32::from(e));
                // 2t - 3u is positive on every generator: prune on it.
                if 2 * nt - 3 * nu > 72 {
                    break;
                }
                rec(gens, i + 1, nt, nu, counts);
                if e >= cap {
                    break;
                }
                e += 1;
            }
        }
        rec(&gens, 0, 0, 0, &mut counts);

        for (d, n) in &dims {
            if (0..=10).contains(&d.t) && (-2..=8).contains(&d.u) {
                assert_eq!(
                    counts.get(&(d.t, d.u)).copied().unwrap_or(0),
                    *n,
                    "A//E(0) dimension mismatch at {d}"
                );
            }
        }
        // And the reverse containment on the shared box.
        for ((t, u), n) in &counts {
            if (0..=10).contains(t) && (-2..=8).contains(u) && *n > 0 {
                let d = MultiDegree::tu(*t, *u);
                assert_eq!(dims.get(&d).copied().unwrap_or(0), *n, "missing degree ({t},{u})");
            }
        }
    }

    #[test]
    fn rewrite_validation_rejects_earlier_generators() {
        let gens = vec![
            GeneratorInfo::new("a", MultiDegree::tu(2, 1)),
            GeneratorInfo::new("b", MultiDegree::tu(4, 2)),
        ];
        // b^2 = a^4 mentions an earlier generator: rejected.
        let mut m = Monomial::one(2);
        m.exps[0] = 4;
        let err = AlgebraPresentation::new(
            "bad",
            gens,
            vec![(1, Polynomial::from_monomial(m))],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::RewriteNotLater { .. }));
    }
}
