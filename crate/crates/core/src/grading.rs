//! Multidegrees and degree windows.
//!
//! Every object in this crate is graded by up to four integer axes:
//!
//! * `s` — a filtration axis (Adams filtration, slice filtration, …).  Some
//!   spectral sequences carry no meaningful filtration axis, so `s` is
//!   optional.
//! * `t` — the internal (simplicial) degree.  Always present.
//! * `u` — the motivic weight.  Always present.
//! * `q` — an auxiliary spectral-sequence axis (ρ-power, slice index, …).
//!   Optional.
//!
//! The *stem* of a degree is `t − s`; when `s` is absent the degree is already
//! stored stem-first and [`MultiDegree::stem_or_t`] falls back to `t`.
//!
//! Addition is only defined between degrees with the same axis shape; mixing
//! shapes is a programming error surfaced as [`GradingError::AxisMismatch`].

use std::fmt;

use thiserror::Error;

/// Identifies one of the four grading axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    /// Filtration axis.
    S,
    /// Internal degree.
    T,
    /// Motivic weight.
    U,
    /// Auxiliary spectral-sequence axis.
    Q,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::S => write!(f, "s"),
            Axis::T => write!(f, "t"),
            Axis::U => write!(f, "u"),
            Axis::Q => write!(f, "q"),
        }
    }
}

/// Errors raised by degree arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    /// Two degrees with different axis shapes were combined.
    #[error("axis {axis} is present on one operand and absent on the other")]
    AxisMismatch {
        /// The offending axis.
        axis: Axis,
    },
    /// `stem()` was requested for a degree without a filtration axis.
    #[error("stem = t - s is undefined: the degree has no s axis")]
    StemWithoutS,
}

/// A degree in up to four integer gradings.
///
/// `s` and `q` are optional so that the same type serves tri- and
/// quadrigraded spectral sequences as well as bigraded coefficient rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiDegree {
    /// Filtration, if the grading carries one.
    pub s: Option<i32>,
    /// Internal degree.
    pub t: i32,
    /// Motivic weight.
    pub u: i32,
    /// Auxiliary axis, if the grading carries one.
    pub q: Option<i32>,
}

impl MultiDegree {
    /// Degree with only `(t, u)` axes.
    #[must_use]
    pub const fn tu(t: i32, u: i32) -> Self {
        MultiDegree { s: None, t, u, q: None }
    }

    /// Degree with `(s, t, u)` axes.
    #[must_use]
    pub const fn stu(s: i32, t: i32, u: i32) -> Self {
        MultiDegree { s: Some(s), t, u, q: None }
    }

    /// Degree with all four axes `(q, s, t, u)`.
    #[must_use]
    pub const fn qstu(q: i32, s: i32, t: i32, u: i32) -> Self {
        MultiDegree { s: Some(s), t, u, q: Some(q) }
    }

    /// Degree with `(t, u, q)` axes and no filtration.
    #[must_use]
    pub const fn tuq(t: i32, u: i32, q: i32) -> Self {
        MultiDegree { s: None, t, u, q: Some(q) }
    }

    /// The zero degree with the same axis shape as `self`.
    #[must_use]
    pub fn zero_like(&self) -> Self {
        MultiDegree {
            s: self.s.map(|_| 0),
            t: 0,
            u: 0,
            q: self.q.map(|_| 0),
        }
    }

    /// Componentwise sum.  Errors if the axis shapes differ.
    pub fn add(&self, other: &MultiDegree) -> Result<MultiDegree, GradingError> {
        let s = match (self.s, other.s) {
            (Some(a), Some(b)) => Some(a + b),
            (None, None) => None,
            _ => return Err(GradingError::AxisMismatch { axis: Axis::S }),
        };
        let q = match (self.q, other.q) {
            (Some(a), Some(b)) => Some(a + b),
            (None, None) => None,
            _ => return Err(GradingError::AxisMismatch { axis: Axis::Q }),
        };
        Ok(MultiDegree { s, t: self.t + other.t, u: self.u + other.u, q })
    }

    /// Componentwise difference.  Errors if the axis shapes differ.
    pub fn sub(&self, other: &MultiDegree) -> Result<MultiDegree, GradingError> {
        self.add(&other.scale(-1))
    }

    /// Scalar multiple (useful for `exponent × generator degree`).
    #[must_use]
    pub fn scale(&self, k: i32) -> MultiDegree {
        MultiDegree {
            s: self.s.map(|v| v * k),
            t: self.t * k,
            u: self.u * k,
            q: self.q.map(|v| v * k),
        }
    }

    /// `t − s`.  Errors when the degree carries no filtration axis.
    pub fn stem(&self) -> Result<i32, GradingError> {
        match self.s {
            Some(s) => Ok(self.t - s),
            None => Err(GradingError::StemWithoutS),
        }
    }

    /// `t − s` when `s` is present, otherwise `t`.
    ///
    /// Gradings without a filtration axis store the stem in the `t` slot, so
    /// this is the canonical "stem column" for tables and charts.
    #[must_use]
    pub fn stem_or_t(&self) -> i32 {
        match self.s {
            Some(s) => self.t - s,
            None => self.t,
        }
    }

    /// True when both degrees have the same set of present axes.
    #[must_use]
    pub fn same_shape(&self, other: &MultiDegree) -> bool {
        self.s.is_some() == other.s.is_some() && self.q.is_some() == other.q.is_some()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if let Some(q) = self.q {
            write!(f, "q={q}, ")?;
        }
        if let Some(s) = self.s {
            write!(f, "s={s}, ")?;
        }
        write!(f, "t={}, u={})", self.t, self.u)
    }
}

/// A closed interval on one axis.
pub type Interval = (i32, i32);

/// A product of closed intervals, one per constrained axis.
///
/// Membership is total: a constraint on an axis the degree does not carry is
/// vacuously satisfied, and an unconstrained axis admits every value.  The
/// `stem` constraint applies to [`MultiDegree::stem_or_t`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeWindow {
    /// Constraint on the filtration axis.
    pub s: Option<Interval>,
    /// Constraint on the internal degree.
    pub t: Option<Interval>,
    /// Constraint on the weight.
    pub u: Option<Interval>,
    /// Constraint on the auxiliary axis.
    pub q: Option<Interval>,
    /// Constraint on the stem `t − s` (or `t` when `s` is absent).
    pub stem: Option<Interval>,
}

impl DegreeWindow {
    /// The default working window: stems `0..=24`, weights `-12..=12`,
    /// filtration `0..=16`.  The internal degree is bounded by
    /// `stem + filtration`, i.e. `t ∈ [0, 40]`.
    #[must_use]
    pub fn standard() -> Self {
        DegreeWindow {
            s: Some((0, 16)),
            t: Some((0, 40)),
            u: Some((-12, 12)),
            q: None,
            stem: Some((0, 24)),
        }
    }

    /// A window with the given stem, weight and filtration ranges; the `t`
    /// range is derived as `[stem.0 + s.0, stem.1 + s.1]`.
    #[must_use]
    pub fn from_ranges(stem: Interval, u: Interval, s: Interval) -> Self {
        DegreeWindow {
            s: Some(s),
            t: Some((stem.0 + s.0, stem.1 + s.1)),
            u: Some(u),
            q: None,
            stem: Some(stem),
        }
    }

    /// True if `d` satisfies every constraint present on an axis `d` carries.
    #[must_use]
    pub fn contains(&self, d: &MultiDegree) -> bool {
        fn ok(range: Option<Interval>, v: Option<i32>) -> bool {
            match (range, v) {
                (Some((lo, hi)), Some(x)) => lo <= x && x <= hi,
                _ => true,
            }
        }
        ok(self.s, d.s)
            && ok(self.t, Some(d.t))
            && ok(self.u, Some(d.u))
            && ok(self.q, d.q)
            && ok(self.stem, Some(d.stem_or_t()))
    }

    /// Enlarges every constrained axis by `pad` in both directions (the `q`
    /// axis only upward: auxiliary filtrations never go negative here).
    ///
    /// Spectral-sequence runs compute on a padded window so that classes near
    /// the requested boundary still see their differentials; results are
    /// reported on the original window.
    #[must_use]
    pub fn padded(&self, pad: i32) -> Self {
        let widen = |r: Option<Interval>| r.map(|(lo, hi)| (lo - pad, hi + pad));
        DegreeWindow {
            s: widen(self.s),
            t: widen(self.t),
            u: self.u, // all implemented differentials preserve the weight
            q: self.q.map(|(lo, hi)| (lo, hi + pad)),
            stem: widen(self.stem),
        }
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn piece(
            f: &mut fmt::Formatter<'_>,
            name: &str,
            r: Option<Interval>,
            first: &mut bool,
        ) -> fmt::Result {
            if let Some((lo, hi)) = r {
                if !*first {
                    write!(f, ", ")?;
                }
                *first = false;
                write!(f, "{name}:{lo}..={hi}")?;
            }
            Ok(())
        }
        let mut first = true;
        piece(f, "stem", self.stem, &mut first)?;
        piece(f, "s", self.s, &mut first)?;
        piece(f, "t", self.t, &mut first)?;
        piece(f, "u", self.u, &mut first)?;
        piece(f, "q", self.q, &mut first)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_matching_shapes() {
        let a = MultiDegree::stu(1, 3, 1);
        let b = MultiDegree::stu(2, 0, -4);
        assert_eq!(a.add(&b).unwrap(), MultiDegree::stu(3, 3, -3));
    }

    #[test]
    fn add_mismatched_shapes_errors() {
        let a = MultiDegree::stu(1, 3, 1);
        let b = MultiDegree::tu(3, 1);
        assert_eq!(a.add(&b), Err(GradingError::AxisMismatch { axis: Axis::S }));
        let c = MultiDegree::qstu(0, 1, 3, 1);
        assert_eq!(a.add(&c), Err(GradingError::AxisMismatch { axis: Axis::Q }));
    }

    #[test]
    fn stem_fallback() {
        assert_eq!(MultiDegree::stu(1, 3, 1).stem(), Ok(2));
        assert_eq!(MultiDegree::tu(3, 1).stem(), Err(GradingError::StemWithoutS));
        assert_eq!(MultiDegree::tu(3, 1).stem_or_t(), 3);
    }

    #[test]
    fn window_membership() {
        let w = DegreeWindow::standard();
        assert!(w.contains(&MultiDegree::stu(1, 3, 1)));
        // stem 25 is out.
        assert!(!w.contains(&MultiDegree::stu(0, 25, 0)));
        // no q constraint: any q admitted.
        assert!(w.contains(&MultiDegree::qstu(99, 1, 3, 1)));
        // degree without s: the s constraint is vacuous, stem falls back to t.
        assert!(w.contains(&MultiDegree::tu(24, 0)));
        assert!(!w.contains(&MultiDegree::tu(-1, 0)));
    }

    #[test]
    fn padding_widens() {
        let w = DegreeWindow::standard().padded(3);
        assert!(w.contains(&MultiDegree::stu(-2, -2, 0)));
        assert!(w.contains(&MultiDegree::stu(19, 43, 0)));
    }
}
