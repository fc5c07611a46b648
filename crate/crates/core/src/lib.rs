//! Multigraded spectral-sequence calculator for motivic K-theory spectra.
//!
//! The crate computes, over the base fields `C`, `R`, and `F_q` (odd `q`), the
//! standard battery of trigraded/quadrigraded spectral sequences attached to
//! the connective motivic spectra `HZ/2`, `HF2`, `kgl`, `k(n)`, and
//! `BPGL<m>` at the prime 2:
//!
//! * the `ρ`-Bockstein spectral sequence ([`instances::build_rho_bockstein`]),
//! * the motivic Adams spectral sequence ([`instances::build_mass`],
//!   [`instances::build_mass_fq`]),
//! * algebraic and homotopical effective slice spectral sequences
//!   ([`instances::build_aesss`], [`instances::build_esss`]), including
//!   "type n" variants whose slices are grouped in bands,
//! * the homological slice spectral sequence ([`instances::build_h_esss`]),
//! * the `C₂`-equivariant slice spectral sequence obtained by realizing the
//!   motivic data over `R` ([`instances::realize_hhr`]), with the negative
//!   cone attached for `kR`.
//!
//! Differentials are driven by small *rule tables* (generator-power sources
//! with Leibniz / linear / explicit propagation modes) executed by a generic
//! GF(2) page engine ([`engine`]) that checks `d∘d = 0` and monotone page
//! dimensions at every turn.  Independently of the rule tables, a brute-force
//! cobar-complex oracle ([`cobar`]) computes `Ext` over the relevant quotient
//! Hopf algebroids `E(n)` and `E(Q_n)` in any finite window, which is how the
//! golden rings shipped in [`algebra::builtin`] are validated.
//!
//! The [`comparison`] module implements the consistency square between the
//! algebraic and homotopical slice approaches ([`comparison::run_square`]),
//! the sliceability diagnostic ([`comparison::check_sliceable`] and
//! [`comparison::diagnose_mgl`]), and the truncation ("fringe") analysis for
//! `BPGL<2>` ([`comparison::fringe_report`]).
//!
//! All computations are exact (GF(2) linear algebra; no floats), deterministic
//! (ordered maps, fixed pivot rules, seeded sampling), and windowed: every
//! enumeration is certified finite by a positive linear functional on the
//! generator degrees before it runs.

pub mod algebra;
pub mod cobar;
pub mod engine;
pub mod gf2;
pub mod grading;
pub mod instances;

pub use algebra::{AlgebraPresentation, GeneratorInfo, Monomial, Polynomial};
pub use engine::{DifferentialRule, Page, RuleMode, RuleTable, RunOutcome, SsFamily};
pub use instances::{BaseField, SliceData, SpectrumFamily, SpectrumId};
pub use grading::{Axis, DegreeWindow, GradingError, MultiDegree};
