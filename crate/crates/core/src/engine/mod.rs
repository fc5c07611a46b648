//! Generic multigraded spectral-sequence machine.
//!
//! A [`Page`] is a window of degreewise `F₂` vector spaces ("blocks") whose
//! basis vectors are classes represented as sums of first-page basis
//! elements — monomials of an [`AlgebraPresentation`], plus negative-cone
//! symbols when a [`NegativeConeModule`] is attached.  Differentials are
//! supplied as a [`RuleTable`] of displayed formulas; [`turn_page`] applies
//! every rule on the current page, checks `d² = 0` literally on matrices,
//! optionally checks the Leibniz derivation property of the table, and
//! replaces each block's basis by homology.
//!
//! The engine materializes blocks on a window padded beyond the caller's
//! reporting window by the total page distance the run can travel, so every
//! reported block has all of its incoming and outgoing differentials fully
//! inside the materialized region.  Pad-ring blocks whose own neighbors fall
//! off the edge are marked unresolved, sticky; they never reach reports.

pub mod cone;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{AlgebraError, AlgebraPresentation, Monomial, Polynomial};
use crate::gf2::{kernel, BitVec, Span};
use crate::grading::{DegreeWindow, GradingError, MultiDegree};

use cone::{ConeElement, ConeRuleFamily, NegativeConeModule};

/// Which spectral sequence a page belongs to; fixes the degree shift of
/// `d_r` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsFamily {
    /// ρ-Bockstein: `d_r` raises the ρ-filtration `q` by `r` and the cobar
    /// filtration `s` by 1.
    RhoBockstein,
    /// Motivic Adams: `d_r: (s, t) ↦ (s + r, t + r - 1)`, slice axis fixed.
    MotivicAdams,
    /// Algebraic slice spectral sequence (native type-`n` slice units):
    /// `d_r: (q, s, t) ↦ (q + r, s - r + 1, t - r)`.
    SliceAlgebraic,
    /// Effective slice spectral sequence in homotopy indexing:
    /// `d_r: (q, t) ↦ (q + r, t - 1)`.
    SliceEffective,
    /// Homological effective slice spectral sequence, `(t, u, q)`-graded
    /// with the same `(q, t)`-shift as the homotopy one.
    SliceHomological,
    /// Realized equivariant slice spectral sequence:
    /// `d_r: (s, t, q) ↦ (s + r, t + r - 1, q + r - 1)`.
    HhrSlice,
}

impl SsFamily {
    /// Degree shift `(Δq, Δs, Δt, Δu)` of `d_r`.
    #[must_use]
    pub fn shift(self, r: i32) -> (i32, i32, i32, i32) {
        match self {
            SsFamily::RhoBockstein => (r, 1, 0, 0),
            SsFamily::MotivicAdams => (0, r, r - 1, 0),
            SsFamily::SliceAlgebraic => (r, 1 - r, -r, 0),
            SsFamily::SliceEffective | SsFamily::SliceHomological => (r, 0, -1, 0),
            SsFamily::HhrSlice => (r - 1, r, r - 1, 0),
        }
    }
}

/// Applies a family shift to a degree, respecting which axes it carries.
/// Shifting an absent axis by a nonzero amount is a programming error.
#[must_use]
pub fn apply_shift(d: &MultiDegree, sh: (i32, i32, i32, i32)) -> MultiDegree {
    let (dq, ds, dt, du) = sh;
    assert!(d.q.is_some() || dq == 0, "q-shift on a degree without q");
    assert!(d.s.is_some() || ds == 0, "s-shift on a degree without s");
    MultiDegree {
        s: d.s.map(|s| s + ds),
        t: d.t + dt,
        u: d.u + du,
        q: d.q.map(|q| q + dq),
    }
}

/// How a displayed differential formula propagates to other monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleMode {
    /// The rule is a value of a derivation: it acts on every monomial with
    /// the source power present, and the table must satisfy the Leibniz
    /// identity (checked at each page turn).
    Leibniz,
    /// Linear over the named generators: the rule acts on monomials of the
    /// form `source-power · residual` whose residual involves only the named
    /// generators and the source generator itself.  No derivation property
    /// is assumed or checked.
    LinearOver(Vec<String>),
    /// The rule acts on the literal source monomial only.
    Explicit,
}

/// One displayed differential: on page `page`, the class of
/// `source_gen^source_power` maps to `target`, propagated per `mode`.
///
/// `source_power` must be a power of two; a monomial matches when that
/// binary digit of its exponent is set (Lucas matching), and the value on
/// the monomial is `target · monomial / source_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialRule {
    /// Page on which the rule acts.
    pub page: i32,
    /// Name of the source generator.
    pub source_gen: String,
    /// Power-of-two exponent of the source.
    pub source_power: u16,
    /// Target polynomial, in the page presentation.
    pub target: Polynomial,
    /// Propagation mode.
    pub mode: RuleMode,
    /// Human-readable provenance note.
    pub origin: String,
}

impl DifferentialRule {
    /// Convenience constructor.
    #[must_use]
    pub fn new(
        page: i32,
        source_gen: &str,
        source_power: u16,
        target: Polynomial,
        mode: RuleMode,
        origin: &str,
    ) -> Self {
        assert!(source_power.is_power_of_two(), "source power must be 2^i");
        DifferentialRule {
            page,
            source_gen: source_gen.to_owned(),
            source_power,
            target,
            mode,
            origin: origin.to_owned(),
        }
    }
}

/// A full differential table: polynomial rules plus negative-cone families.
#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    /// Rules acting on monomial classes.
    pub rules: Vec<DifferentialRule>,
    /// Rules acting on negative-cone symbols.
    pub cone_rules: Vec<ConeRuleFamily>,
}

impl RuleTable {
    /// Sorted distinct pages on which something acts, up to `last`.
    #[must_use]
    pub fn pages(&self, last: i32) -> Vec<i32> {
        let mut pages: BTreeSet<i32> = self.rules.iter().map(|r| r.page).collect();
        pages.extend(self.cone_rules.iter().map(|r| r.page));
        pages.into_iter().filter(|&r| r <= last).collect()
    }

    /// Total page distance a run through `last` can travel; used to pad the
    /// materialized window so reported blocks stay exact.
    #[must_use]
    pub fn required_pad(&self, last: i32) -> i32 {
        1 + self.pages(last).iter().sum::<i32>().max(last)
    }
}

/// Inconsistencies of a differential table with the complex axioms — these
/// are hard failures: the run stops rather than reporting wrong pages.
#[derive(Debug, thiserror::Error)]
pub enum RuleInconsistency {
    /// Two successive applications of `d_r` had a nonzero matrix product.
    #[error("d_{page} ∘ d_{page} ≠ 0 out of degree {degree}")]
    D2Nonzero {
        /// Page of the offending differential.
        page: i32,
        /// Degree whose block maps twice to something nonzero.
        degree: MultiDegree,
    },
    /// A Leibniz-mode table failed the derivation identity on a pair.
    #[error("Leibniz identity fails on page {page} for ({x})·({y})")]
    LeibnizViolation {
        /// Page of the offending rules.
        page: i32,
        /// First factor.
        x: String,
        /// Second factor.
        y: String,
    },
    /// A differential hit a value that is not a class of the target block.
    #[error("page-{page} differential from {degree} misses the target page: {value}")]
    UnsolvableTarget {
        /// Page of the offending differential.
        page: i32,
        /// Source degree.
        degree: MultiDegree,
        /// Rendered image that could not be expressed.
        value: String,
    },
    /// A rule's target degree disagrees with the family shift for its page.
    #[error("rule `{origin}` is not homogeneous for its page: expected shift {expected}, got {got}")]
    ShiftMismatch {
        /// Provenance of the offending rule.
        origin: String,
        /// Shift demanded by the family and page.
        expected: MultiDegree,
        /// Shift the rule actually has.
        got: MultiDegree,
    },
}

/// Engine errors.
#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    /// The differential table is inconsistent (hard failure).
    #[error("rule table inconsistency: {0}")]
    RuleTableInconsistency(#[from] RuleInconsistency),
    /// An underlying algebra operation failed.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// An underlying degree operation failed.
    #[error(transparent)]
    Grading(#[from] GradingError),
    /// A rule references a generator the page presentation lacks.
    #[error("rule `{origin}` references unknown generator {gen}")]
    UnknownGenerator {
        /// Provenance of the offending rule.
        origin: String,
        /// The missing generator name.
        gen: String,
    },
}

/// A first-page basis element: a monomial of the presentation or a
/// negative-cone symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElt {
    /// Monomial of the page presentation.
    Mon(Monomial),
    /// Negative-cone symbol.
    Cone(ConeElement),
}

/// A page class: a GF(2) sum of first-page basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassRep {
    /// The support of the sum.
    pub terms: BTreeSet<BasisElt>,
}

impl ClassRep {
    /// The class of a single basis element.
    #[must_use]
    pub fn singleton(e: BasisElt) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(e);
        ClassRep { terms }
    }

    /// GF(2) addition.
    pub fn xor_assign(&mut self, other: &ClassRep) {
        for t in &other.terms {
            if !self.terms.remove(t) {
                self.terms.insert(t.clone());
            }
        }
    }

    /// The deterministic lead term (least in basis-element order).
    #[must_use]
    pub fn lead(&self) -> Option<&BasisElt> {
        self.terms.iter().next()
    }
}

/// One degree's worth of page data.
#[derive(Debug, Clone)]
struct DegreeBlock {
    /// First-page basis of this degree, fixed for the whole run.
    elements: Vec<BasisElt>,
    /// Index of `elements`.
    index: BTreeMap<BasisElt, usize>,
    /// Current page basis.
    basis: Vec<ClassRep>,
    /// First-page coordinates of `basis` (parallel vector).
    rep_vectors: Vec<BitVec>,
    /// Accumulated boundary subspace, in first-page coordinates.
    boundaries: Span,
    /// Sticky flag: this block's data may be inexact because a differential
    /// involving it left the materialized window.
    unresolved: bool,
}

impl DegreeBlock {
    fn new(elements: Vec<BasisElt>) -> Self {
        let index = elements.iter().cloned().zip(0..).collect();
        let n = elements.len();
        let basis = elements.iter().cloned().map(ClassRep::singleton).collect();
        let rep_vectors = (0..n).map(|i| BitVec::from_indices(n, &[i])).collect();
        DegreeBlock {
            elements,
            index,
            basis,
            rep_vectors,
            boundaries: Span::new(),
            unresolved: false,
        }
    }

    /// First-page coordinates of a class rep.
    fn coords(&self, rep: &ClassRep) -> BitVec {
        let mut v = BitVec::zeros(self.elements.len());
        for term in &rep.terms {
            let i = *self.index.get(term).expect("rep term indexed in its block");
            v.flip(i);
        }
        v
    }
}

/// View of one block in a report: dimension, labels, exactness flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockView {
    /// Dimension of the block on the snapshotted page.
    pub dim: usize,
    /// One deterministic label per basis class (lead term, `+…` when the
    /// representative has more terms).
    pub labels: Vec<String>,
    /// Lead monomials of the classes whose lead is an algebra monomial
    /// (cone classes are omitted, so this can be shorter than `dim`).
    pub lead_monomials: Vec<Monomial>,
    /// True when the block's data may be inexact (never inside the
    /// reporting window).
    pub unresolved: bool,
}

/// Degreewise view of a page.
pub type Snapshot = BTreeMap<MultiDegree, BlockView>;

/// A nonzero differential hit during a run, for charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialEvent {
    /// Page of the differential.
    pub page: i32,
    /// Source degree.
    pub source: MultiDegree,
    /// Target degree.
    pub target: MultiDegree,
    /// Rank of the differential matrix out of the source degree.
    pub rank: usize,
}

/// The report of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Name of the run (usually the page name).
    pub name: String,
    /// Family of the spectral sequence.
    pub family: SsFamily,
    /// Snapshots `(page, view)` — the starting page and the page after each
    /// turn with rules.
    pub snapshots: Vec<(i32, Snapshot)>,
    /// The stable page (equal to the last snapshot).
    pub infinity: Snapshot,
    /// Every nonzero differential, in degree order per page.
    pub events: Vec<DifferentialEvent>,
}

/// A spectral-sequence page over a window.
#[derive(Debug, Clone)]
pub struct Page {
    /// Display name of the instance, e.g. `rho-Bockstein kgl/R`.
    pub name: String,
    /// Spectral-sequence family (fixes differential shifts).
    pub family: SsFamily,
    /// Current page number.
    pub r: i32,
    /// First-page presentation; all classes are sums of its monomials.
    pub presentation: AlgebraPresentation,
    /// Optional negative-cone module contributing extra basis symbols.
    pub cone: Option<NegativeConeModule>,
    /// The reporting window.
    pub window: DegreeWindow,
    /// The materialized window (reporting window plus travel padding).
    internal: DegreeWindow,
    /// Blocks by degree.
    blocks: BTreeMap<MultiDegree, DegreeBlock>,
    /// Per-generator slice-unit deficits, used when flattening a slice page
    /// into an Adams-graded one.
    pub deficits: BTreeMap<String, i32>,
}

impl Page {
    /// Builds the starting page: every first-page basis element in the
    /// padded window becomes a class.  `table` and `last_page` determine the
    /// padding needed to keep the reporting window exact.
    pub fn new(
        name: &str,
        family: SsFamily,
        r0: i32,
        presentation: AlgebraPresentation,
        cone: Option<NegativeConeModule>,
        window: &DegreeWindow,
        table: &RuleTable,
        last_page: i32,
    ) -> Result<Page, EngineError> {
        let internal = window.padded(table.required_pad(last_page));
        let mut by_degree: BTreeMap<MultiDegree, Vec<BasisElt>> = BTreeMap::new();
        for (d, monos) in presentation.basis_in_window(&internal)? {
            by_degree
                .entry(d)
                .or_default()
                .extend(monos.into_iter().map(BasisElt::Mon));
        }
        if let Some(c) = &cone {
            for e in c.basis_in_window(&internal) {
                by_degree.entry(c.degree(&e)).or_default().push(BasisElt::Cone(e));
            }
        }
        let blocks = by_degree
            .into_iter()
            .map(|(d, mut els)| {
                els.sort();
                (d, DegreeBlock::new(els))
            })
            .collect();
        Ok(Page {
            name: name.to_owned(),
            family,
            r: r0,
            presentation,
            cone,
            window: *window,
            internal,
            blocks,
            deficits: BTreeMap::new(),
        })
    }

    /// Dimension of the block at `d` on the current page (0 when absent).
    #[must_use]
    pub fn dim_at(&self, d: &MultiDegree) -> usize {
        self.blocks.get(d).map_or(0, |b| b.basis.len())
    }

    /// Basis class representatives at `d` on the current page (empty when
    /// the degree has no block).
    #[must_use]
    pub fn class_reps(&self, d: &MultiDegree) -> &[ClassRep] {
        self.blocks.get(d).map_or(&[][..], |b| b.basis.as_slice())
    }

    /// Rank of the images of `reps` in the current page's block at `d`,
    /// i.e. modulo the boundaries accumulated so far.  Every term of every
    /// rep must be a first-page basis element of the block; reps of classes
    /// that have already died contribute zero.
    #[must_use]
    pub fn residue_rank(&self, d: &MultiDegree, reps: &[ClassRep]) -> usize {
        let Some(block) = self.blocks.get(d) else {
            assert!(
                reps.iter().all(|rep| rep.terms.is_empty()),
                "nonzero rep in a degree with no block"
            );
            return 0;
        };
        let mut span = Span::new();
        for row in block.boundaries.basis() {
            span.insert(row);
        }
        reps.iter().filter(|rep| span.insert(&block.coords(rep))).count()
    }

    /// Whether the first-page chain `rep` represents a *nonzero class of the
    /// current page* at `d`: it must lie in the span of the page's basis
    /// classes plus accumulated boundaries (i.e. still be a cycle for every
    /// differential applied so far) and outside the boundaries alone.  A
    /// chain that supported a differential on an earlier page fails the
    /// first test; one that was hit fails the second.
    #[must_use]
    pub fn class_is_alive(&self, d: &MultiDegree, rep: &ClassRep) -> bool {
        let Some(block) = self.blocks.get(d) else { return false };
        let coords = block.coords(rep);
        let mut boundaries = Span::new();
        for row in block.boundaries.basis() {
            boundaries.insert(row);
        }
        if !boundaries.insert(&coords) {
            return false;
        }
        let mut cycles = Span::new();
        for row in block.boundaries.basis() {
            cycles.insert(row);
        }
        for v in &block.rep_vectors {
            cycles.insert(v);
        }
        !cycles.insert(&coords)
    }

    /// Degreewise view of the current page, restricted to the reporting
    /// window and to nonzero blocks.  Reported blocks are always exact.
    #[must_use]
    pub fn snapshot(&self) -> Snapshot {
        let mut out = Snapshot::new();
        for (d, b) in &self.blocks {
            if b.basis.is_empty() || !self.window.contains(d) {
                continue;
            }
            assert!(!b.unresolved, "window padding keeps reported blocks exact");
            let labels = b.basis.iter().map(|rep| self.label_rep(rep)).collect();
            let lead_monomials = b
                .basis
                .iter()
                .filter_map(|rep| match rep.lead() {
                    Some(BasisElt::Mon(m)) => Some(m.clone()),
                    _ => None,
                })
                .collect();
            out.insert(
                *d,
                BlockView { dim: b.basis.len(), labels, lead_monomials, unresolved: false },
            );
        }
        out
    }

    /// Deterministic label of a class rep: its lead term, with `+…` marking
    /// longer sums.
    #[must_use]
    pub fn label_rep(&self, rep: &ClassRep) -> String {
        let Some(lead) = rep.lead() else { return "0".to_owned() };
        let mut label = match lead {
            BasisElt::Mon(m) => self.presentation.label(m),
            BasisElt::Cone(e) => {
                self.cone.as_ref().expect("cone elements imply a cone module").label(e)
            }
        };
        if rep.terms.len() > 1 {
            label.push_str("+…");
        }
        label
    }

    /// The value of the page-`r` rules on one first-page basis element.
    fn elt_differential(
        &self,
        e: &BasisElt,
        rules: &[(usize, &DifferentialRule)],
        cone_rules: &[&ConeRuleFamily],
    ) -> Result<Vec<BasisElt>, EngineError> {
        match e {
            BasisElt::Mon(m) => {
                let mut out = Polynomial::zero();
                for (gi, rule) in rules {
                    if let Some(v) = rule_value(&self.presentation, *gi, rule, m) {
                        out.add_assign(&v);
                    }
                }
                Ok(out.iter().cloned().map(BasisElt::Mon).collect())
            }
            BasisElt::Cone(c) => {
                let mut out = Vec::new();
                for fam in cone_rules {
                    if let Some(t) = fam.apply(c) {
                        out.push(BasisElt::Cone(t));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Applies the page-`r` differentials, checks the complex axioms, and
    /// replaces every block by its homology.
    pub fn turn_page(
        &mut self,
        r: i32,
        table: &RuleTable,
    ) -> Result<Vec<DifferentialEvent>, EngineError> {
        let rules: Vec<(usize, &DifferentialRule)> = table
            .rules
            .iter()
            .filter(|rule| rule.page == r)
            .map(|rule| {
                self.presentation
                    .gen_index(&rule.source_gen)
                    .map(|gi| (gi, rule))
                    .ok_or_else(|| EngineError::UnknownGenerator {
                        origin: rule.origin.clone(),
                        gen: rule.source_gen.clone(),
                    })
            })
            .collect::<Result<_, _>>()?;
        let cone_rules: Vec<&ConeRuleFamily> =
            table.cone_rules.iter().filter(|f| f.page == r).collect();
        self.check_rule_shapes(r, &rules, &cone_rules)?;
        if rules.iter().any(|(_, rule)| rule.mode == RuleMode::Leibniz) {
            self.leibniz_check(r, &rules)?;
        }
        let shift = self.family.shift(r);

        // Pass 1: matrices.  mats[d] has one row per basis class of d, with
        // coordinates over the *page basis* of the target block.
        let degrees: Vec<MultiDegree> = self.blocks.keys().copied().collect();
        let mut mats: BTreeMap<MultiDegree, Vec<BitVec>> = BTreeMap::new();
        let mut solvers: HashMap<MultiDegree, (usize, Span)> = HashMap::new();
        let mut newly_unresolved: Vec<MultiDegree> = Vec::new();
        let mut events = Vec::new();
        for d in &degrees {
            let src = &self.blocks[d];
            let target_deg = apply_shift(d, shift);
            let mut rows = Vec::with_capacity(src.basis.len());
            let mut rank_span = Span::new();
            for rep in &src.basis {
                let mut image: BTreeSet<BasisElt> = BTreeSet::new();
                for term in &rep.terms {
                    for out in self.elt_differential(term, &rules, &cone_rules)? {
                        if !image.remove(&out) {
                            image.insert(out);
                        }
                    }
                }
                if image.is_empty() {
                    let cols = self.blocks.get(&target_deg).map_or(0, |b| b.basis.len());
                    rows.push(BitVec::zeros(cols));
                    continue;
                }
                let Some(tgt) = self.blocks.get(&target_deg) else {
                    // Nonzero image off the materialized window: this source
                    // block cannot be resolved.  (Never happens inside the
                    // reporting window thanks to the travel padding.)
                    newly_unresolved.push(*d);
                    rows.push(BitVec::zeros(0));
                    continue;
                };
                let (k0, solver) = solvers.entry(target_deg).or_insert_with(|| {
                    let mut sp = Span::new();
                    for b in tgt.boundaries.basis() {
                        assert!(sp.insert(b));
                    }
                    let k0 = sp.generator_count();
                    for v in &tgt.rep_vectors {
                        assert!(sp.insert(v), "page basis independent mod boundaries");
                    }
                    (k0, sp)
                });
                let mut vec = BitVec::zeros(tgt.elements.len());
                for term in &image {
                    let Some(&i) = tgt.index.get(term) else {
                        return Err(RuleInconsistency::UnsolvableTarget {
                            page: r,
                            degree: *d,
                            value: self.label_rep(&ClassRep {
                                terms: image.clone(),
                            }),
                        }
                        .into());
                    };
                    vec.flip(i);
                }
                let Some(combo) = solver.solve(&vec) else {
                    return Err(RuleInconsistency::UnsolvableTarget {
                        page: r,
                        degree: *d,
                        value: self.label_rep(&ClassRep { terms: image }),
                    }
                    .into());
                };
                let mut row = BitVec::zeros(tgt.basis.len());
                for bit in combo.ones() {
                    if bit >= *k0 {
                        row.flip(bit - *k0);
                    }
                }
                rank_span.insert(&row);
                rows.push(row);
            }
            if rank_span.dim() > 0 {
                events.push(DifferentialEvent {
                    page: r,
                    source: *d,
                    target: target_deg,
                    rank: rank_span.dim(),
                });
            }
            mats.insert(*d, rows);
        }

        // Pass 2: literal d² = 0 on composable matrix pairs.
        for d in &degrees {
            let target_deg = apply_shift(d, shift);
            let Some(next) = mats.get(&target_deg) else { continue };
            let cols = self
                .blocks
                .get(&apply_shift(&target_deg, shift))
                .map_or(0, |b| b.basis.len());
            for row in &mats[d] {
                let mut acc = BitVec::zeros(cols);
                for j in row.ones() {
                    if next[j].is_zero() {
                        continue;
                    }
                    acc.xor_assign(&next[j]);
                }
                if !acc.is_zero() {
                    return Err(RuleInconsistency::D2Nonzero { page: r, degree: *d }.into());
                }
            }
        }

        // Pass 3: homology.  New basis = kernel of the outgoing matrix
        // modulo the image of the incoming one; boundaries accumulate.
        // Exactness flags spread one shift per turn, matching how far wrong
        // data can flow: a block is infected by an unresolved source or
        // target, or by a possibly-nonzero incoming differential from off
        // the materialized window.
        let edge_marked: BTreeSet<MultiDegree> = newly_unresolved.iter().copied().collect();
        let mut updates: BTreeMap<MultiDegree, (Vec<ClassRep>, Vec<BitVec>, Vec<BitVec>, bool)> =
            BTreeMap::new();
        for d in &degrees {
            let block = &self.blocks[d];
            let out_rows = &mats[d];
            let source_deg = apply_shift(d, (-shift.0, -shift.1, -shift.2, -shift.3));
            let target_deg = apply_shift(d, shift);
            let in_rows: &[BitVec] = mats.get(&source_deg).map_or(&[], Vec::as_slice);
            let neighbor_unresolved = |nd: &MultiDegree| {
                edge_marked.contains(nd)
                    || self.blocks.get(nd).is_some_and(|b| b.unresolved)
            };
            let in_from_edge = neighbor_unresolved(&source_deg)
                || neighbor_unresolved(&target_deg)
                || (!self.blocks.contains_key(&source_deg) && self.could_receive(&source_deg));
            let mut span = Span::new();
            let mut boundary_vecs = Vec::new();
            for row in in_rows {
                // Rows of the incoming matrix are combinations over this
                // block's basis; their first-page coordinates become
                // boundaries.
                if row.is_zero() {
                    continue;
                }
                if span.insert(row) {
                    let mut v = BitVec::zeros(block.elements.len());
                    for bit in row.ones() {
                        v.xor_assign(&block.rep_vectors[bit]);
                    }
                    boundary_vecs.push(v);
                }
            }
            let mut new_basis = Vec::new();
            let mut new_vectors = Vec::new();
            for combo in kernel(out_rows) {
                if !span.insert(&combo) {
                    continue;
                }
                let mut rep = ClassRep::default();
                let mut v = BitVec::zeros(block.elements.len());
                for bit in combo.ones() {
                    rep.xor_assign(&block.basis[bit]);
                    v.xor_assign(&block.rep_vectors[bit]);
                }
                new_basis.push(rep);
                new_vectors.push(v);
            }
            assert!(new_basis.len() <= block.basis.len(), "pages only shrink");
            updates.insert(*d, (new_basis, new_vectors, boundary_vecs, in_from_edge));
        }
        for (d, (basis, vectors, boundary_vecs, in_from_edge)) in updates {
            let block = self.blocks.get_mut(&d).expect("updating an existing block");
            block.basis = basis;
            block.rep_vectors = vectors;
            for v in &boundary_vecs {
                block.boundaries.insert(v);
            }
            if in_from_edge {
                block.unresolved = true;
            }
        }
        for d in newly_unresolved {
            self.blocks.get_mut(&d).expect("existing block").unresolved = true;
        }
        self.r = r + 1;
        Ok(events)
    }

    /// Edge test: could a block at the unmaterialized degree `d` hold
    /// classes (and so map into the materialized region)?  Degrees inside
    /// the internal window answer false — they are materialized whenever
    /// nonempty, so their absence means zero.  Outside it, the presentation
    /// and cone are consulted for actual basis elements.
    fn could_receive(&self, d: &MultiDegree) -> bool {
        if self.internal.contains(d) {
            return false;
        }
        if matches!(self.presentation.basis_in_degree(d), Ok(b) if !b.is_empty()) {
            return true;
        }
        self.cone.as_ref().is_some_and(|c| {
            let exact = DegreeWindow {
                s: d.s.map(|v| (v, v)),
                t: Some((d.t, d.t)),
                u: Some((d.u, d.u)),
                q: d.q.map(|v| (v, v)),
                stem: None,
            };
            d.s.is_some() && !c.basis_in_window(&exact).is_empty()
        })
    }

    /// Validates that every page-`r` rule shifts degree by the family shift.
    fn check_rule_shapes(
        &self,
        r: i32,
        rules: &[(usize, &DifferentialRule)],
        cone_rules: &[&ConeRuleFamily],
    ) -> Result<(), EngineError> {
        let shift = self.family.shift(r);
        for (gi, rule) in rules {
            let src = Monomial::single(self.presentation.ngens(), *gi, rule.source_power);
            let src_deg = self.presentation.degree_of(&src)?;
            let expected = apply_shift(&src_deg, shift);
            for t in rule.target.iter() {
                let got = self.presentation.degree_of(t)?;
                if got != expected {
                    return Err(RuleInconsistency::ShiftMismatch {
                        origin: rule.origin.clone(),
                        expected: expected.sub(&src_deg)?,
                        got: got.sub(&src_deg)?,
                    }
                    .into());
                }
            }
        }
        if let Some(cone) = &self.cone {
            for fam in cone_rules {
                let src = ConeElement { a: fam.src_a_min, b: fam.src_b, c: 0 };
                if let Some(tgt) = fam.apply(&src) {
                    let got = cone.degree(&tgt).sub(&cone.degree(&src))?;
                    let src_deg = cone.degree(&src);
                    let expected = apply_shift(&src_deg, shift).sub(&src_deg)?;
                    if got != expected {
                        return Err(RuleInconsistency::ShiftMismatch {
                            origin: fam.origin.clone(),
                            expected,
                            got,
                        }
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Derivation-consistency check for Leibniz-mode rules on page `r`:
    /// `d(xy) = d(x)·y + x·d(y)` as rule tables, on pairs drawn from pure
    /// powers of the source generators times a deterministic sample of alive
    /// monomials.  This is what rejects tables that are secretly only
    /// module-linear.
    fn leibniz_check(
        &self,
        r: i32,
        rules: &[(usize, &DifferentialRule)],
    ) -> Result<(), EngineError> {
        let pres = &self.presentation;
        // Pure powers of each Leibniz source generator present in blocks.
        let mut xs: Vec<Monomial> = Vec::new();
        for (gi, rule) in rules {
            if rule.mode != RuleMode::Leibniz {
                continue;
            }
            for j in 0..10u32 {
                let m = Monomial::single(pres.ngens(), *gi, 1 << j);
                if pres.is_normal(&m) && self.is_alive(&m) {
                    xs.push(m);
                }
            }
        }
        xs.sort();
        xs.dedup();
        // Sample of alive monomials: lead terms of current classes, capped.
        let mut sample: Vec<Monomial> = xs.clone();
        'outer: for block in self.blocks.values() {
            for rep in &block.basis {
                if let Some(BasisElt::Mon(m)) = rep.lead() {
                    sample.push(m.clone());
                    if sample.len() >= 72 {
                        break 'outer;
                    }
                }
            }
        }
        sample.sort();
        sample.dedup();
        let d_of = |m: &Monomial| -> Polynomial {
            let mut out = Polynomial::zero();
            for (gi, rule) in rules {
                if let Some(v) = rule_value(pres, *gi, rule, m) {
                    out.add_assign(&v);
                }
            }
            out
        };
        for x in &xs {
            for y in &sample {
                let xy = pres.multiply_monomials(x, y);
                // d(xy), extended additively over the normal form of xy.
                let mut lhs = Polynomial::zero();
                for m in xy.iter() {
                    lhs.add_assign(&d_of(m));
                }
                let mut rhs = pres.multiply(&d_of(x), &Polynomial::from_monomial(y.clone()));
                rhs.add_assign(&pres.multiply(&Polynomial::from_monomial(x.clone()), &d_of(y)));
                if lhs != rhs {
                    return Err(RuleInconsistency::LeibnizViolation {
                        page: r,
                        x: pres.label(x),
                        y: pres.label(y),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    /// True when the monomial's class is nonzero on the current page.
    fn is_alive(&self, m: &Monomial) -> bool {
        let Ok(d) = self.presentation.degree_of(m) else { return false };
        let Some(block) = self.blocks.get(&d) else { return false };
        let Some(&i) = block.index.get(&BasisElt::Mon(m.clone())) else { return false };
        let vec = BitVec::from_indices(block.elements.len(), &[i]);
        let mut span = Span::new();
        for b in block.boundaries.basis() {
            span.insert(b);
        }
        let k0 = span.generator_count();
        for v in &block.rep_vectors {
            span.insert(v);
        }
        match span.solve(&vec) {
            Some(combo) => combo.ones().iter().any(|&b| b >= k0),
            None => false,
        }
    }
}

/// Evaluates one rule on one monomial, or `None` when it does not match.
///
/// Matching is by the binary digit of the source exponent (Lucas); the value
/// is `target · m / source^power`, normalized, subject to the mode's
/// residual restriction.
fn rule_value(
    pres: &AlgebraPresentation,
    gi: usize,
    rule: &DifferentialRule,
    m: &Monomial,
) -> Option<Polynomial> {
    if m.exp(gi) & rule.source_power == 0 {
        return None;
    }
    let mut residual = m.clone();
    residual.set_exp(gi, m.exp(gi) - rule.source_power);
    match &rule.mode {
        RuleMode::Leibniz => {}
        RuleMode::LinearOver(names) => {
            let allowed: Vec<usize> = names
                .iter()
                .filter_map(|n| pres.gen_index(n))
                .chain([gi])
                .collect();
            for j in 0..pres.ngens() {
                if residual.exp(j) > 0 && !allowed.contains(&j) {
                    return None;
                }
            }
        }
        RuleMode::Explicit => {
            if !residual.is_one() {
                return None;
            }
        }
    }
    Some(pres.multiply(&rule.target, &Polynomial::from_monomial(residual)))
}

/// Evaluates the page-`r` differential of the table on a single algebra
/// monomial, symbolically: the sum of every matching rule's value on `m`.
/// This is the same map `turn_page` applies to basis classes, exposed so
/// callers can spot-check the Leibniz identity or trace individual classes
/// without running a page.
pub fn monomial_differential(
    pres: &AlgebraPresentation,
    table: &RuleTable,
    r: i32,
    m: &Monomial,
) -> Result<Polynomial, EngineError> {
    let mut out = Polynomial::zero();
    for rule in table.rules.iter().filter(|rule| rule.page == r) {
        let gi = pres
            .gen_index(&rule.source_gen)
            .ok_or_else(|| EngineError::UnknownGenerator {
                origin: rule.origin.clone(),
                gen: rule.source_gen.clone(),
            })?;
        if let Some(v) = rule_value(pres, gi, rule, m) {
            out.add_assign(&v);
        }
    }
    Ok(out)
}

/// Runs the table against the page through `last_page`, returning the final
/// page and the report.  Snapshots record the starting page and the page
/// after each turn that had rules.
pub fn run(
    mut page: Page,
    table: &RuleTable,
    last_page: i32,
) -> Result<(Page, RunOutcome), EngineError> {
    let mut snapshots = vec![(page.r, page.snapshot())];
    let mut events = Vec::new();
    for r in table.pages(last_page) {
        if r < page.r {
            continue;
        }
        events.extend(page.turn_page(r, table)?);
        snapshots.push((r + 1, page.snapshot()));
    }
    let infinity = snapshots.last().expect("at least the starting snapshot").1.clone();
    let outcome = RunOutcome {
        name: page.name.clone(),
        family: page.family,
        snapshots,
        infinity,
        events,
    };
    Ok((page, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin::{ext_eqn, ext_kgl, CoefficientField};
    use crate::algebra::GeneratorInfo;

    /// ρ-Bockstein first page for a quotient with generators τ, ρ, v₀…v_n:
    /// the complex-point Ext with a polynomial ρ adjoined, `(q,s,t,u)`-graded
    /// with `q` the ρ-exponent.
    fn bockstein_presentation(vs: &[(u32, &str)]) -> AlgebraPresentation {
        let mut gens = vec![
            GeneratorInfo::new("tau", MultiDegree::qstu(0, 0, 0, -1)),
            GeneratorInfo::new("rho", MultiDegree::qstu(1, 0, -1, -1)),
        ];
        for &(n, name) in vs {
            gens.push(GeneratorInfo::new(
                name,
                MultiDegree::qstu(0, 1, (1 << (n + 1)) - 1, (1 << n) - 1),
            ));
        }
        AlgebraPresentation::new("bockstein-E1", gens, vec![], vec![]).unwrap()
    }

    fn window() -> DegreeWindow {
        DegreeWindow::from_ranges((0, 12), (-8, 8), (0, 8))
    }

    /// Collapses a `(q,s,t,u)` snapshot to `(s,t,u)` total dimensions.
    fn sum_over_q(snap: &Snapshot) -> BTreeMap<MultiDegree, usize> {
        let mut out: BTreeMap<MultiDegree, usize> = BTreeMap::new();
        for (d, view) in snap {
            let key = MultiDegree::stu(d.s.expect("s-graded"), d.t, d.u);
            *out.entry(key).or_default() += view.dim;
        }
        out.retain(|_, v| *v > 0);
        out
    }

    fn golden_dims(
        a: &AlgebraPresentation,
        w: &DegreeWindow,
    ) -> BTreeMap<MultiDegree, usize> {
        a.poincare_series(w)
            .unwrap()
            .into_iter()
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    #[test]
    fn kgl_bockstein_run_matches_the_closed_form() {
        let pres = bockstein_presentation(&[(0, "v0"), (1, "v1")]);
        let mut table = RuleTable::default();
        table.rules.push(DifferentialRule::new(
            1,
            "tau",
            1,
            pres.polynomial(&[&[("rho", 1), ("v0", 1)]]),
            RuleMode::Leibniz,
            "d1(tau) = rho*v0",
        ));
        table.rules.push(DifferentialRule::new(
            3,
            "tau",
            2,
            pres.polynomial(&[&[("rho", 3), ("v1", 1)]]),
            RuleMode::Leibniz,
            "d3(tau^2) = rho^3*v1",
        ));
        let page = Page::new(
            "bockstein kgl/R",
            SsFamily::RhoBockstein,
            1,
            pres,
            None,
            &window(),
            &table,
            3,
        )
        .unwrap();
        let (_, outcome) = run(page, &table, 3).unwrap();
        assert_eq!(
            sum_over_q(&outcome.infinity),
            golden_dims(&ext_kgl(CoefficientField::R), &window())
        );
        assert!(outcome.events.iter().any(|e| e.page == 1));
        assert!(outcome.events.iter().any(|e| e.page == 3));
    }

    #[test]
    fn kn_bockstein_is_linear_not_leibniz() {
        // The type-n table d_{2^{n+1}-1}(τ^{2^n}) = ρ^{2^{n+1}-1}·v_n acts
        // linearly over ρ and v_n.  For n = 1:
        let pres = bockstein_presentation(&[(1, "v1")]);
        let rule = DifferentialRule::new(
            3,
            "tau",
            2,
            pres.polynomial(&[&[("rho", 3), ("v1", 1)]]),
            RuleMode::LinearOver(vec!["rho".into(), "v1".into()]),
            "d3(tau^2) = rho^3*v1",
        );
        let table = RuleTable { rules: vec![rule], cone_rules: vec![] };
        let page = Page::new(
            "bockstein k(1)/R",
            SsFamily::RhoBockstein,
            1,
            pres.clone(),
            None,
            &window(),
            &table,
            3,
        )
        .unwrap();
        let (_, outcome) = run(page, &table, 3).unwrap();
        assert_eq!(
            sum_over_q(&outcome.infinity),
            golden_dims(&ext_eqn(1, CoefficientField::R), &window())
        );

        // The same table declared as a derivation is inconsistent: τ
        // survives while τ² does not, and the pair (τ, τ) betrays it.
        let bad = RuleTable {
            rules: vec![DifferentialRule::new(
                3,
                "tau",
                2,
                pres.polynomial(&[&[("rho", 3), ("v1", 1)]]),
                RuleMode::Leibniz,
                "d3(tau^2) = rho^3*v1",
            )],
            cone_rules: vec![],
        };
        let page = Page::new(
            "bockstein k(1)/R misuse",
            SsFamily::RhoBockstein,
            1,
            pres,
            None,
            &window(),
            &bad,
            3,
        )
        .unwrap();
        let err = run(page, &bad, 3).unwrap_err();
        assert!(
            matches!(
                err,
                EngineError::RuleTableInconsistency(
                    RuleInconsistency::LeibnizViolation { .. }
                        | RuleInconsistency::D2Nonzero { .. }
                )
            ),
            "got {err}"
        );
    }

    #[test]
    fn d_squared_is_checked_literally() {
        // d₁(a) = b and d₁(b) = c is degreewise consistent but not a
        // complex; the literal matrix check must reject it.
        let gens = vec![
            GeneratorInfo::nilpotent("a", MultiDegree::qstu(0, 0, 1, 0), 2),
            GeneratorInfo::nilpotent("b", MultiDegree::qstu(1, 1, 1, 0), 2),
            GeneratorInfo::nilpotent("c", MultiDegree::qstu(2, 2, 1, 0), 2),
        ];
        let pres = AlgebraPresentation::new("bad-complex", gens, vec![], vec![]).unwrap();
        let table = RuleTable {
            rules: vec![
                DifferentialRule::new(
                    1,
                    "a",
                    1,
                    pres.polynomial(&[&[("b", 1)]]),
                    RuleMode::Explicit,
                    "d1(a) = b",
                ),
                DifferentialRule::new(
                    1,
                    "b",
                    1,
                    pres.polynomial(&[&[("c", 1)]]),
                    RuleMode::Explicit,
                    "d1(b) = c",
                ),
            ],
            cone_rules: vec![],
        };
        let mut w = DegreeWindow::from_ranges((-4, 4), (-4, 4), (0, 4));
        w.q = Some((0, 6));
        let page =
            Page::new("bad", SsFamily::RhoBockstein, 1, pres, None, &w, &table, 1).unwrap();
        let err = run(page, &table, 1).unwrap_err();
        assert!(matches!(
            err,
            EngineError::RuleTableInconsistency(RuleInconsistency::D2Nonzero { .. })
        ));
    }

    #[test]
    fn rule_shift_validation_rejects_misplaced_pages() {
        // The kgl d₃ formula filed on page 2 has the wrong shift for its
        // page and must be rejected up front.
        let pres = bockstein_presentation(&[(0, "v0"), (1, "v1")]);
        let table = RuleTable {
            rules: vec![DifferentialRule::new(
                2,
                "tau",
                2,
                pres.polynomial(&[&[("rho", 3), ("v1", 1)]]),
                RuleMode::Leibniz,
                "misfiled",
            )],
            cone_rules: vec![],
        };
        let page = Page::new(
            "misfiled",
            SsFamily::RhoBockstein,
            1,
            pres,
            None,
            &window(),
            &table,
            2,
        )
        .unwrap();
        let err = run(page, &table, 2).unwrap_err();
        assert!(matches!(
            err,
            EngineError::RuleTableInconsistency(RuleInconsistency::ShiftMismatch { .. })
        ));
    }

    #[test]
    fn explicit_mode_does_not_propagate() {
        let pres = bockstein_presentation(&[(0, "v0")]);
        let rule = DifferentialRule::new(
            1,
            "tau",
            1,
            pres.polynomial(&[&[("rho", 1), ("v0", 1)]]),
            RuleMode::Explicit,
            "d1(tau) = rho*v0, explicit",
        );
        let m_tau = pres.monomial(&[("tau", 1)]);
        let m_tau3 = pres.monomial(&[("tau", 3)]);
        let gi = pres.gen_index("tau").unwrap();
        assert!(rule_value(&pres, gi, &rule, &m_tau).is_some());
        assert!(rule_value(&pres, gi, &rule, &m_tau3).is_none());
    }
}
