//! Builders producing `(Page, RuleTable)` pairs — packaged as [`Instance`] —
//! for each named spectral sequence, spectrum, and base field.
//!
//! Supported spectra: `HZ2`, `HF2`, `kgl`, `k(n)` (`n ≥ 1`), `BPGL<m>`, and
//! an `MGL` diagnostic mode.  Base fields: `C`, `R`, `F_q` (odd `q`).
//!
//! Conventions shared by the builders:
//!
//! * ρ-Bockstein pages are `(q,s,t,u)`-graded with `q` the ρ-exponent (the
//!   exterior `u`-exponent over finite fields).
//! * Slice pages come in two indexings: the algebraic variant counts `q` in
//!   type-`n` band units, the homotopical variant in ordinary slice units;
//!   both carry slice labels (`v1l`, `vnl`, `v13`, `v2l`, `w2`) in filtration
//!   zero, with the Adams filtration they *would* carry recorded as a deficit
//!   on the page for flattening.
//! * Realized `C₂`-pages keep the motivic names (`tau` for the norm class,
//!   `rho` for the Euler class) with `v̄`-generators written `vbar<n>`.
//!
//! Every rule carries a human-readable `origin` string; builders additionally
//! push modeling notes onto the instance.

use std::collections::BTreeMap;

use crate::algebra::builtin::{
    a_mod_e, ext_bpgl, ext_e0, ext_eqn, ext_kgl, m2, p_even, FqClass,
};
use crate::algebra::{AlgebraError, AlgebraPresentation, GeneratorInfo, Monomial, Polynomial};
use crate::engine::cone::{derive_cone_rule, NegativeConeModule};
use crate::engine::{
    DifferentialRule, EngineError, Page, RuleMode, RuleTable, RunOutcome, SsFamily,
};
use crate::grading::{DegreeWindow, GradingError, MultiDegree};

pub use crate::algebra::builtin::CoefficientField as BaseField;

/// Which spectrum a spectral sequence is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectrumFamily {
    /// Motivic Eilenberg–MacLane spectrum of the 2-adic integers.
    HZ2,
    /// Motivic Eilenberg–MacLane spectrum of `F₂`.
    HF2,
    /// Effective cover of algebraic K-theory.
    Kgl,
    /// Connective Morava K-theory `k(n)`, `n ≥ 1`.
    KN(u32),
    /// Truncated Brown–Peterson spectrum `BPGL<m>`.
    Bpgl(u32),
    /// Algebraic cobordism, diagnostic-only.
    Mgl,
}

impl SpectrumFamily {
    /// Canonical short name, e.g. `k(2)` or `BPGL<1>`.
    #[must_use]
    pub fn name(self) -> String {
        match self {
            SpectrumFamily::HZ2 => "HZ2".to_owned(),
            SpectrumFamily::HF2 => "HF2".to_owned(),
            SpectrumFamily::Kgl => "kgl".to_owned(),
            SpectrumFamily::KN(n) => format!("k({n})"),
            SpectrumFamily::Bpgl(m) => format!("BPGL<{m}>"),
            SpectrumFamily::Mgl => "MGL".to_owned(),
        }
    }

    /// Parses the compact CLI spelling: `hz2`, `hf2`, `kgl`, `k1`…,
    /// `bpgl0`…, `mgl`.
    #[must_use]
    pub fn parse(s: &str) -> Option<SpectrumFamily> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "hz2" => return Some(SpectrumFamily::HZ2),
            "hf2" => return Some(SpectrumFamily::HF2),
            "kgl" => return Some(SpectrumFamily::Kgl),
            "mgl" => return Some(SpectrumFamily::Mgl),
            _ => {}
        }
        if let Some(n) = s.strip_prefix('k').and_then(|t| t.parse::<u32>().ok()) {
            return Some(SpectrumFamily::KN(n));
        }
        s.strip_prefix("bpgl")
            .and_then(|t| t.parse::<u32>().ok())
            .map(SpectrumFamily::Bpgl)
    }

    /// The indices `i` of the `v_i`-generators in the complex-point Ext.
    fn v_indices(self) -> Vec<u32> {
        match self {
            SpectrumFamily::HZ2 => vec![0],
            SpectrumFamily::HF2 | SpectrumFamily::Mgl => vec![],
            SpectrumFamily::Kgl => vec![0, 1],
            SpectrumFamily::KN(n) => vec![n],
            SpectrumFamily::Bpgl(m) => (0..=m).collect(),
        }
    }
}

/// A spectrum over a base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumId {
    /// The spectrum.
    pub family: SpectrumFamily,
    /// The base field.
    pub field: BaseField,
}

impl SpectrumId {
    /// Constructor.
    #[must_use]
    pub fn new(family: SpectrumFamily, field: BaseField) -> Self {
        SpectrumId { family, field }
    }

    /// Display name, e.g. `kgl/R`.
    #[must_use]
    pub fn name(self) -> String {
        format!("{}/{}", self.family.name(), self.field)
    }

    /// Validates the structural invariants: `k(n)` needs `n ≥ 1`, finite
    /// fields need odd `q ≥ 3`.
    pub fn validate(self) -> Result<(), InstanceError> {
        if let SpectrumFamily::KN(n) = self.family {
            if n == 0 {
                return Err(InstanceError::Unsupported {
                    spectrum: self.name(),
                    reason: "k(n) requires n >= 1 (k(0) is HZ2)".to_owned(),
                });
            }
        }
        if let BaseField::Fq(q) = self.field {
            if q % 2 == 0 || q < 3 {
                return Err(InstanceError::Unsupported {
                    spectrum: self.name(),
                    reason: "finite base fields must have odd q >= 3".to_owned(),
                });
            }
        }
        Ok(())
    }
}

/// Errors raised by instance builders.
#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    /// The spectrum/field/operation combination is not provided.
    #[error("{spectrum}: {reason}")]
    Unsupported {
        /// Offending spectrum name.
        spectrum: String,
        /// Why it is not provided.
        reason: String,
    },
    /// The spectrum is not algebraically `n`-sliceable, so the requested
    /// slice tower does not exist.
    #[error("{spectrum} is not algebraically {n}-sliceable: {reason}")]
    NotSliceable {
        /// Offending spectrum name.
        spectrum: String,
        /// The slice type requested.
        n: u32,
        /// The obstruction.
        reason: String,
    },
    /// Algebra-level failure.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// Engine-level failure.
    #[error(transparent)]
    Engine(#[from] EngineError),
    /// Degree-arithmetic failure.
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// A ready-to-run spectral sequence: starting page, differential table, the
/// page to run through, and modeling notes for reports.
#[derive(Debug, Clone)]
pub struct Instance {
    /// The starting page.
    pub page: Page,
    /// The differential table.
    pub table: RuleTable,
    /// Last page on which any rule acts (runs stop after it).
    pub last_page: i32,
    /// Modeling notes surfaced in reports.
    pub notes: Vec<String>,
}

impl Instance {
    /// Runs the instance to its stable page.
    pub fn run(self) -> Result<(Page, RunOutcome), EngineError> {
        crate::engine::run(self.page, &self.table, self.last_page)
    }
}

/// The default reporting window: stems `0..=24`, weights `-12..=12`,
/// filtration `0..=16`.
#[must_use]
pub fn default_window() -> DegreeWindow {
    DegreeWindow::standard()
}

/// The realized-page reporting window: stems `0..=24`, weights `-12..=12`,
/// filtration `-16..=16` (negative filtrations hold the negative cone).
#[must_use]
pub fn hhr_window() -> DegreeWindow {
    DegreeWindow::from_ranges((0, 24), (-12, 12), (-16, 16))
}

// ---------------------------------------------------------------------------
// shared presentation plumbing
// ---------------------------------------------------------------------------

// Rebuilds `base` with a `q`-axis (every base generator at the `q`-degree
// `q_of` assigns) and extra generators appended after the base ones.
// Rewrites and truncations carry over (their monomials are widened).
fn extend_presentation(
    name: &str,
    base: &AlgebraPresentation,
    extra: Vec<GeneratorInfo>,
    q_of: &dyn Fn(&GeneratorInfo) -> i32,
) -> Result<AlgebraPresentation, AlgebraError> {
    let mut gens: Vec<GeneratorInfo> = base.generators.clone();
    for g in &mut gens {
        g.degree.q = Some(q_of(g));
    }
    gens.extend(extra);
    let n_new = gens.len();
    let widen = |m: &Monomial| {
        let mut e = m.exps.clone();
        e.resize(n_new, 0);
        Monomial { exps: e }
    };
    let rewrites = base
        .rewrites
        .iter()
        .map(|(&i, p)| (i, p.iter().map(widen).collect()))
        .collect();
    let truncations = base.truncations.iter().map(widen).collect();
    let mut out = AlgebraPresentation::new(name, gens, rewrites, truncations)?;
    for n in &base.notes {
        out.push_note(n);
    }
    Ok(out)
}

// The degree of `v_i` in complex-point Ext, `(s,t,u)`.
fn v_degree(i: u32) -> MultiDegree {
    MultiDegree::stu(1, (1 << (i + 1)) - 1, (1 << i) - 1)
}

// The `ρ`-like generator of the Bockstein direction: polynomial `rho` over
// `R`, exterior `u` over finite fields (aliased `rho` when `q ≡ 3 mod 4`).
fn bockstein_generator(field: BaseField) -> GeneratorInfo {
    let d = MultiDegree::qstu(1, 0, -1, -1);
    match field {
        BaseField::R => GeneratorInfo::new("rho", d),
        BaseField::Fq(_) => {
            let g = GeneratorInfo::nilpotent("u", d, 2);
            if field.has_rho() {
                g.with_alias("rho")
            } else {
                g
            }
        }
        BaseField::C => unreachable!("no Bockstein direction over C"),
    }
}

// Name of the Bockstein generator in rule targets.
fn rho_name(field: BaseField) -> &'static str {
    match field {
        BaseField::R => "rho",
        _ => "u",
    }
}

/// Adams-filtration deficits of the slice-label generators: the filtration a
/// label would carry in the Adams grading minus the zero it carries in the
/// slice grading.  Used to flatten slice pages onto Adams pages.
#[must_use]
pub fn slice_deficits(pres: &AlgebraPresentation) -> BTreeMap<String, i32> {
    let mut out = BTreeMap::new();
    for g in &pres.generators {
        let d = match g.name.as_str() {
            "v13" => 3,
            "w2" => 2,
            name if name.starts_with('v') && name.ends_with('l') => 1,
            "v1c" => 1,
            _ => 0,
        };
        if d != 0 {
            out.insert(g.name.clone(), d);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// ρ-Bockstein
// ---------------------------------------------------------------------------

/// The ρ-Bockstein spectral sequence of `sp` on `window`.
///
/// The first page is the complex-point Ext of the spectrum with the
/// Bockstein class adjoined, `(q,s,t,u)`-graded by the Bockstein exponent.
/// Rules per family: `HZ2`, `kgl` and `BPGL<m>` carry the derivation table
/// `d_{2^{i+1}-1}(τ^{2^i}) = ρ^{2^{i+1}-1} v_i`; `k(n)` carries the single
/// `v_n`-rule propagated linearly over `ρ` and `v_n` (it is *not* a
/// derivation: `τ^{2^n}` hits `ρ`-torsion while `τ^{2^{n+1}}` survives);
/// `HF2` collapses.  Over `F_q` only the `q ≡ 3 (mod 4)` fields see a
/// differential, and only the `v_0`-rule (higher targets are `u²`-torsion).
pub fn build_rho_bockstein(
    sp: SpectrumId,
    window: &DegreeWindow,
) -> Result<Instance, InstanceError> {
    sp.validate()?;
    if sp.field == BaseField::C {
        return Err(InstanceError::Unsupported {
            spectrum: sp.name(),
            reason: "the complex-point coefficients have no Bockstein direction".to_owned(),
        });
    }
    if sp.family == SpectrumFamily::Mgl {
        return Err(InstanceError::Unsupported {
            spectrum: sp.name(),
            reason: "MGL is served by the diagnostic in the comparison module".to_owned(),
        });
    }
    if let SpectrumFamily::Bpgl(m) = sp.family {
        if m > 3 {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "BPGL<m> Bockstein tables are provided for m <= 3".to_owned(),
            });
        }
    }
    let base = match sp.family {
        SpectrumFamily::HZ2 => ext_e0(BaseField::C),
        SpectrumFamily::Kgl => ext_kgl(BaseField::C),
        SpectrumFamily::KN(n) => ext_eqn(n, BaseField::C),
        SpectrumFamily::Bpgl(m) => ext_bpgl(m, BaseField::C),
        SpectrumFamily::HF2 => AlgebraPresentation::new(
            "Ext_HF2_C",
            vec![GeneratorInfo::new("tau", MultiDegree::stu(0, 0, -1))],
            vec![],
            vec![],
        )?,
        SpectrumFamily::Mgl => unreachable!(),
    };
    let name = format!("rho-Bockstein {}", sp.name());
    let pres = extend_presentation(
        &format!("E1 {name}"),
        &base,
        vec![bockstein_generator(sp.field)],
        &|_| 0,
    )?;

    let rho = rho_name(sp.field);
    let mut rules = Vec::new();
    let fq3 = matches!(sp.field.fq_class(), Some(FqClass::ThreeMod4 { .. }));
    let fq1 = matches!(sp.field.fq_class(), Some(FqClass::OneMod4 { .. }));
    for i in sp.family.v_indices() {
        // Over F_q the Bockstein class squares to zero, so only the first
        // rule has a nonzero target; over q ≡ 1 even that vanishes.
        if fq1 || (fq3 && i > 0) {
            continue;
        }
        let page = (1 << (i + 1)) - 1;
        let power = 1u16 << i;
        let rho_pow = u16::try_from((1u32 << (i + 1)) - 1).expect("small");
        let target = pres.polynomial(&[&[(rho, rho_pow), (&format!("v{i}"), 1)]]);
        let mode = if matches!(sp.family, SpectrumFamily::KN(_)) {
            RuleMode::LinearOver(vec![rho.to_owned(), format!("v{i}")])
        } else {
            RuleMode::Leibniz
        };
        rules.push(DifferentialRule::new(
            page,
            "tau",
            power,
            target,
            mode,
            &format!("d{page}(tau^{power}) = {rho}^{rho_pow}*v{i} (Bockstein family i={i})"),
        ));
    }
    let table = RuleTable { rules, cone_rules: vec![] };
    let last_page = table.pages(i32::MAX).last().copied().unwrap_or(1);
    let page = Page::new(
        &name,
        SsFamily::RhoBockstein,
        1,
        pres,
        None,
        window,
        &table,
        last_page,
    )?;
    let mut notes = vec![format!(
        "E1 = complex-point Ext tensored with the Bockstein class `{rho}`; q = {rho}-exponent"
    )];
    if fq3 {
        notes.push("u^2 = 0 kills every target beyond the v0-rule".to_owned());
    }
    if fq1 {
        notes.push("the Bockstein class is exterior and not rho: no differentials".to_owned());
    }
    Ok(Instance { page, table, last_page, notes })
}

// ---------------------------------------------------------------------------
// motivic Adams
// ---------------------------------------------------------------------------

/// Finds the degrees with room for a nonzero `d_r` among `dims`: pairs of
/// nonzero entries a page-`r` shift apart, for `r` in `r_lo..=r_hi`.
/// An empty answer certifies collapse within the window.
///
/// This is the right tool for pages that are plain dimension tables (a
/// realized chart after its last differential, say).  For a *multiplicative*
/// starting page it is too blunt — it happily pairs degrees no derivation
/// could connect — so prefer [`generator_no_room_scan`] there.
#[must_use]
pub fn no_room_scan(
    dims: &BTreeMap<MultiDegree, usize>,
    family: SsFamily,
    r_lo: i32,
    r_hi: i32,
) -> Vec<(i32, MultiDegree, MultiDegree)> {
    let mut out = Vec::new();
    for r in r_lo..=r_hi {
        let shift = family.shift(r);
        for (d, &n) in dims {
            if n == 0 {
                continue;
            }
            let t = crate::engine::apply_shift(d, shift);
            if dims.get(&t).copied().unwrap_or(0) > 0 {
                out.push((r, *d, t));
            }
        }
    }
    out
}

/// Generator-level collapse certificate for a multiplicative page.  For
/// every generator `g` of `pres` and every page `r` in `r_lo..=r_hi`, checks
/// that the exact degree a page-`r` differential on `g` would land in
/// contains no monomials at all.  An empty answer forces `d_r(g) = 0` for
/// every generator, hence `d_r = 0` on the whole algebra by the Leibniz
/// rule.  Unlike [`no_room_scan`] this is a windowless statement: the degree
/// queries are exact, so the conclusion is not clipped at the window edge
/// and is immune to source/target pairs no derivation could connect.
pub fn generator_no_room_scan(
    pres: &AlgebraPresentation,
    family: SsFamily,
    r_lo: i32,
    r_hi: i32,
) -> Result<Vec<(i32, String, MultiDegree)>, InstanceError> {
    let mut out = Vec::new();
    for g in &pres.generators {
        for r in r_lo..=r_hi {
            let target = crate::engine::apply_shift(&g.degree, family.shift(r));
            if !pres.basis_in_degree(&target)?.is_empty() {
                out.push((r, g.name.clone(), target));
            }
        }
    }
    Ok(out)
}

/// The motivic Adams spectral sequence of `sp` on `window`.
///
/// Over `C` and `R` the supported spectra collapse at the starting page: the
/// rule table is empty and a generator-level no-room scan certifying the
/// collapse is recorded in the notes (rerun [`generator_no_room_scan`] to
/// inspect it).  Over `F_q` this delegates to [`build_mass_fq`].  For
/// `BPGL<m>/R` there is no closed-form starting page — see
/// [`mass_dims_bpgl_r`].
pub fn build_mass(sp: SpectrumId, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    sp.validate()?;
    if matches!(sp.field, BaseField::Fq(_)) {
        return build_mass_fq(sp, window);
    }
    let pres = match (sp.family, sp.field) {
        (SpectrumFamily::HZ2, f) => ext_e0(f),
        (SpectrumFamily::Kgl, f) => ext_kgl(f),
        (SpectrumFamily::KN(n), f) => ext_eqn(n, f),
        (SpectrumFamily::Bpgl(m), BaseField::C) => ext_bpgl(m, BaseField::C),
        (SpectrumFamily::Bpgl(_), BaseField::R) => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "no closed-form Adams page over R; use mass_dims_bpgl_r \
                         (Bockstein stable-page dimensions)"
                    .to_owned(),
            });
        }
        _ => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "no Adams page is provided for this spectrum".to_owned(),
            });
        }
    };
    let name = format!("mASS {}", sp.name());
    let table = RuleTable::default();
    let page = Page::new(&name, SsFamily::MotivicAdams, 2, pres.clone(), None, window, &table, 2)?;
    let mut notes =
        vec!["collapse at the starting page: empty rule table".to_owned()];
    let span = window.s.map_or(16, |(lo, hi)| hi - lo);
    let room = generator_no_room_scan(&pres, SsFamily::MotivicAdams, 2, span + 1)?;
    if room.is_empty() {
        notes.push(format!(
            "generator scan r=2..={}: no admissible nonzero targets for any \
             generator, so every d_r in the range vanishes identically",
            span + 1
        ));
    } else {
        notes.push(format!(
            "generator scan: {} generator/page pairs with room (collapse imposed, \
             not forced by degrees)",
            room.len()
        ));
    }
    Ok(Instance { page, table, last_page: 2, notes })
}

/// `(stem, weight, filtration)`-free dimensions of the Adams starting page
/// for `BPGL<m>/R`: the ρ-Bockstein stable page, with `q` summed away into
/// the `(s,t,u)`-degree it already includes.
pub fn mass_dims_bpgl_r(
    m: u32,
    window: &DegreeWindow,
) -> Result<BTreeMap<MultiDegree, usize>, InstanceError> {
    let inst = build_rho_bockstein(
        SpectrumId::new(SpectrumFamily::Bpgl(m), BaseField::R),
        window,
    )?;
    let (_, outcome) = inst.run()?;
    let mut dims: BTreeMap<MultiDegree, usize> = BTreeMap::new();
    for (d, view) in &outcome.infinity {
        let key = MultiDegree::stu(d.s.expect("Bockstein pages are s-graded"), d.t, d.u);
        *dims.entry(key).or_default() += view.dim;
    }
    Ok(dims)
}

/// The motivic Adams spectral sequence over a finite field, with the
/// arithmetic differential pattern:
///
/// * `q ≡ 1 (mod 4)`, `ν = ν₂(q−1)`:  `d_{ν+s}(τ^{2^s}) = u·τ^{2^s−1}·h₀^{ν+s}`;
/// * `q ≡ 3 (mod 4)`, `ν = ν₂(q²−1)`: `d_{ν+s}(τ^{2^s}) = [ρτ]·τ^{2^s−2}·h₀^{ν+s}`
///   for `s ≥ 1` (the starting page has already absorbed the one Bockstein
///   differential, so `τ²` is the first power present).
///
/// Pages are degree-consistent with the displayed formulas: the filtration
/// jump of the stated target is `ν+s`, so the rule is filed on page `ν+s`.
/// Rules whose source `τ`-power cannot meet the window are omitted.  Spectra
/// without a `v₀`-tower (`k(n)`) collapse.
pub fn build_mass_fq(sp: SpectrumId, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    sp.validate()?;
    let BaseField::Fq(q) = sp.field else {
        return Err(InstanceError::Unsupported {
            spectrum: sp.name(),
            reason: "build_mass_fq requires a finite base field".to_owned(),
        });
    };
    let pres = match sp.family {
        SpectrumFamily::HZ2 => ext_e0(sp.field),
        SpectrumFamily::Kgl => ext_kgl(sp.field),
        SpectrumFamily::KN(n) => ext_eqn(n, sp.field),
        SpectrumFamily::Bpgl(m) => ext_bpgl(m, sp.field),
        _ => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "no Adams page is provided for this spectrum".to_owned(),
            });
        }
    };
    let name = format!("mASS {}", sp.name());
    let mut rules = Vec::new();
    let mut notes = Vec::new();
    let has_v0 = pres.gen_index("v0").is_some();
    // Largest τ-power that can divide a monomial the run touches: positive
    // weight comes only from the v's, each contributing at most its
    // filtration times (2^n - 1) but capped by the t-window, so any power
    // beyond max(u-span, s_hi - u_lo) has every source and target outside
    // the reported window and within-run reach.
    let (u_lo, u_hi) = window.u.unwrap_or((-12, 12));
    let s_hi = window.s.map_or(16, |(_, hi)| hi);
    let u_span = (i64::from(u_hi) - i64::from(u_lo)).max(i64::from(s_hi) - i64::from(u_lo));
    if has_v0 {
        match sp.field.fq_class() {
            Some(FqClass::OneMod4 { nu }) => {
                let nu = i32::try_from(nu).expect("small");
                for s in 0..=6u32 {
                    if i64::from(1u32 << s) > u_span || nu + i32::try_from(s).unwrap() > s_hi + 1 {
                        break;
                    }
                    let page = nu + i32::try_from(s).unwrap();
                    let h0_pow = u16::try_from(page).expect("small");
                    let tau_rest = (1u16 << s) - 1;
                    let mut parts: Vec<(&str, u16)> = vec![("u", 1), ("v0", h0_pow)];
                    if tau_rest > 0 {
                        parts.push(("tau", tau_rest));
                    }
                    let target = pres.polynomial(&[&parts]);
                    rules.push(DifferentialRule::new(
                        page,
                        "tau",
                        1 << s,
                        target,
                        RuleMode::Leibniz,
                        &format!("d{page}(tau^{}) = u*tau^{tau_rest}*h0^{h0_pow}", 1 << s),
                    ));
                }
                notes.push(format!("q = {q} = 1 mod 4, nu2(q-1) = {nu}"));
            }
            Some(FqClass::ThreeMod4 { nu }) => {
                let nu = i32::try_from(nu).expect("small");
                for s in 1..=6u32 {
                    if i64::from(1u32 << s) > u_span || nu + i32::try_from(s).unwrap() > s_hi + 1 {
                        break;
                    }
                    let page = nu + i32::try_from(s).unwrap();
                    let h0_pow = u16::try_from(page).expect("small");
                    let tau2_rest = (1u16 << (s - 1)) - 1;
                    let mut parts: Vec<(&str, u16)> = vec![("rhotau", 1), ("v0", h0_pow)];
                    if tau2_rest > 0 {
                        parts.push(("tau2", tau2_rest));
                    }
                    let target = pres.polynomial(&[&parts]);
                    rules.push(DifferentialRule::new(
                        page,
                        "tau2",
                        1 << (s - 1),
                        target,
                        RuleMode::Leibniz,
                        &format!(
                            "d{page}(tau^{}) = [rho*tau]*tau^{}*h0^{h0_pow}",
                            1 << s,
                            (1 << s) - 2
                        ),
                    ));
                }
                notes.push(format!(
                    "q = {q} = 3 mod 4, nu2(q^2-1) = {nu}; pages follow the \
                     filtration jump of the stated targets"
                ));
            }
            None => unreachable!("finite field"),
        }
    } else {
        notes.push("no v0-tower: the arithmetic differentials have no target".to_owned());
    }
    let table = RuleTable { rules, cone_rules: vec![] };
    let last_page = table.pages(i32::MAX).last().copied().unwrap_or(2);
    let page = Page::new(
        &name,
        SsFamily::MotivicAdams,
        2,
        pres,
        None,
        window,
        &table,
        last_page,
    )?;
    Ok(Instance { page, table, last_page, notes })
}

// ---------------------------------------------------------------------------
// slice spectral sequences
// ---------------------------------------------------------------------------

/// Which slice indexing a builder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SliceIndexing {
    /// Type-`n` band units (algebraic variant): one unit per `2^n - 1`
    /// ordinary slices.
    Band,
    /// Ordinary slice units (homotopical variant).
    Ordinary,
}

/// Coefficient spectrum of one slice summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceCoefficient {
    /// Integral (2-adic) Eilenberg–MacLane summand — contributes a
    /// `v₀`-tower per degree.
    HZ2,
    /// Mod-2 Eilenberg–MacLane summand.
    HF2,
}

/// One suspension `Σ^{2w,w}` of a coefficient spectrum, labeled by the
/// `v`-monomial that indexes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceSummand {
    /// Suspension bidegree `(t, u)`.
    pub suspension: MultiDegree,
    /// Coefficient spectrum.
    pub coefficient: SliceCoefficient,
    /// Label, e.g. `v1^2*v2`.
    pub label: String,
}

/// The slices of a spectrum in type-`n` indexing: `q ↦` summands of the
/// `q`-th type-`n` slice.  Empty lists are recorded (they are the
/// sliceability obstructions for `k(n)` at type 1).
#[derive(Debug, Clone, Default)]
pub struct SliceData {
    /// Summands per type-`n` slice index.
    pub summands: BTreeMap<i32, Vec<SliceSummand>>,
}

/// Computes the slice data of `sp` (base-field independent) in type-`n`
/// indexing, for slice indices `0..=q_hi`.
pub fn slice_data(sp: SpectrumId, n: u32, q_hi: i32) -> Result<SliceData, InstanceError> {
    sp.validate()?;
    let unit = (1i64 << n) - 1;
    let mut data = SliceData::default();
    // v-monomial weights: for each ordinary weight w, the list of labels.
    let vs: Vec<u32> = match sp.family {
        SpectrumFamily::Kgl => vec![1],
        SpectrumFamily::KN(m) => vec![m],
        SpectrumFamily::Bpgl(m) => (1..=m).collect(),
        SpectrumFamily::HZ2 | SpectrumFamily::HF2 => vec![],
        SpectrumFamily::Mgl => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "MGL slice data is out of scope (diagnostic only)".to_owned(),
            });
        }
    };
    let coeff = match sp.family {
        SpectrumFamily::KN(_) | SpectrumFamily::HF2 => SliceCoefficient::HF2,
        _ => SliceCoefficient::HZ2,
    };
    // Enumerate v-monomials of each ordinary weight by bounded DFS.
    let max_w = (i64::from(q_hi) + 1) * unit - 1;
    let mut mons: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    fn rec(
        vs: &[u32],
        i: usize,
        w: i64,
        max_w: i64,
        label: &mut Vec<String>,
        out: &mut BTreeMap<i64, Vec<String>>,
    ) {
        if i == vs.len() {
            out.entry(w).or_default().push(if label.is_empty() {
                "1".to_owned()
            } else {
                label.join("*")
            });
            return;
        }
        let step = (1i64 << vs[i]) - 1;
        let mut e = 0;
        while w + step * i64::from(e) <= max_w {
            if e > 0 {
                label.push(if e == 1 {
                    format!("v{}", vs[i])
                } else {
                    format!("v{}^{e}", vs[i])
                });
                rec(vs, i + 1, w + step * i64::from(e), max_w, label, out);
                label.pop();
            } else {
                rec(vs, i + 1, w, max_w, label, out);
            }
            e += 1;
        }
    }
    rec(&vs, 0, 0, max_w, &mut Vec::new(), &mut mons);
    for q in 0..=q_hi {
        let mut list = Vec::new();
        for w in i64::from(q) * unit..(i64::from(q) + 1) * unit {
            for label in mons.get(&w).map_or(&[][..], |v| v.as_slice()) {
                let w32 = i32::try_from(w).expect("window-sized weight");
                list.push(SliceSummand {
                    suspension: MultiDegree::tu(2 * w32, w32),
                    coefficient: coeff,
                    label: label.clone(),
                });
            }
        }
        data.summands.insert(q, list);
    }
    Ok(data)
}

// The Ext of one integral slice over the base field, `(q,s,t,u)`-lifted at
// `q = 0` — the building block of the kgl-style slice pages.
fn slice_zero_ext(field: BaseField, name: &str) -> Result<AlgebraPresentation, AlgebraError> {
    extend_presentation(name, &ext_e0(field), vec![], &|_| 0)
}

// Builds the kgl slice page: zero-slice Ext tensored with the slice label
// `v1l` at the given q-degree.
fn kgl_slice_page(
    field: BaseField,
    indexing: SliceIndexing,
    name: &str,
) -> Result<AlgebraPresentation, AlgebraError> {
    let _ = indexing; // kgl is type 1: both indexings agree.
    let base = ext_e0(field);
    let v1l = GeneratorInfo::new("v1l", MultiDegree::qstu(1, 0, 2, 1)).with_alias("v1");
    extend_presentation(name, &base, vec![v1l], &|_| 0)
}

// Builds the k(n) slice page: `F₂[τ,ρ-like] ⊗ F₂[vnl]` with the label at
// the indexing-dependent q-degree.
fn kn_slice_page(
    n: u32,
    field: BaseField,
    indexing: SliceIndexing,
    name: &str,
) -> Result<AlgebraPresentation, AlgebraError> {
    let q_deg = match indexing {
        SliceIndexing::Band => 1,
        SliceIndexing::Ordinary => (1 << n) - 1,
    };
    let vnl = GeneratorInfo::new(
        &format!("v{n}l"),
        MultiDegree::qstu(q_deg, 0, (1 << (n + 1)) - 2, (1 << n) - 1),
    )
    .with_alias(&format!("v{n}"));
    extend_presentation(name, &m2_lift(field)?, vec![vnl], &|_| 0)
}

// `𝕄₂` of the base field as an `(q,s,t,u)`-graded, filtration-zero ring.
fn m2_lift(field: BaseField) -> Result<AlgebraPresentation, AlgebraError> {
    let base = m2(field);
    let mut gens = base.generators.clone();
    for g in &mut gens {
        g.degree = MultiDegree::qstu(0, 0, g.degree.t, g.degree.u);
    }
    AlgebraPresentation::new(&format!("{}_slices", base.name), gens, vec![], vec![])
}

// The two-band closed form of the `BPGL<2>` type-2 slice page over `R`:
// per-band homology of the `v₁`-family acting inside each band of three
// ordinary slices.  Basis: `{tau4^a rho^b v0^c w^e w2^f v1c^g}` (the band-0
// core, with `w = [τ²v₀]`, `w2 = [τ²v₁²]`) tensored with `F₂[v13, v2l]`
// (`v13 = v1³` starts the next `v₁`-ladder, `v2l = v₂` the next band).
//
// The core relations: `w² = tau4·v0²`; `rho·v0 = rho·w = 0` (zero-slice
// relation), `rho³·v1c = 0` (in-band boundary), `v1c³ = 0` (leaves the
// band: restart from `v13`), `w2·v1c = 0` (`τ²v1³` is not an in-band
// cycle), `w2·{v0, w, w2} = 0` (those products re-express in core
// monomials: `w·v1c²`, `tau4·v0·v1c²`, `tau4·v1c·v13`).
fn band_page_bpgl2(
    field: BaseField,
    indexing: SliceIndexing,
    name: &str,
) -> Result<AlgebraPresentation, AlgebraError> {
    let (q_w2, q_v1c, q_v13, q_v2l) = match indexing {
        SliceIndexing::Band => (0, 0, 1, 1),
        SliceIndexing::Ordinary => (2, 1, 3, 3),
    };
    if field == BaseField::R {
        let gens = vec![
            GeneratorInfo::nilpotent("w2", MultiDegree::qstu(q_w2, 0, 4, 0), 2),
            GeneratorInfo::new("w", MultiDegree::qstu(0, 1, 1, -2)),
            GeneratorInfo::new("tau4", MultiDegree::qstu(0, 0, 0, -4)),
            GeneratorInfo::new("rho", MultiDegree::qstu(0, 0, -1, -1)),
            GeneratorInfo::new("v0", MultiDegree::qstu(0, 1, 1, 0)).with_alias("h0"),
            GeneratorInfo::nilpotent("v1c", MultiDegree::qstu(q_v1c, 0, 2, 1), 3)
                .with_alias("v1"),
            GeneratorInfo::new("v13", MultiDegree::qstu(q_v13, 0, 6, 3)),
            GeneratorInfo::new("v2l", MultiDegree::qstu(q_v2l, 0, 6, 3)).with_alias("v2"),
        ];
        let proto = AlgebraPresentation::new(name, gens.clone(), vec![], vec![])?;
        let w = proto.gen_index("w").expect("w");
        let w_sq = proto.polynomial(&[&[("tau4", 1), ("v0", 2)]]);
        let truncs = vec![
            proto.monomial(&[("rho", 1), ("v0", 1)]),
            proto.monomial(&[("rho", 1), ("w", 1)]),
            proto.monomial(&[("rho", 3), ("v1c", 1)]),
            proto.monomial(&[("w2", 1), ("v0", 1)]),
            proto.monomial(&[("w2", 1), ("w", 1)]),
            proto.monomial(&[("w2", 1), ("v1c", 1)]),
        ];
        let mut a = AlgebraPresentation::new(name, gens, vec![(w, w_sq)], truncs)?;
        a.push_note(
            "two-band closed form: core {tau4,rho,v0,w,w2,v1c} tensor F2[v13,v2l]; \
             products that leave the band-0 core are truncated to their core \
             re-expressions",
        );
        Ok(a)
    } else {
        // Over C and F_q the in-band family has zero targets, so the page
        // is the free tensor of the zero-slice Ext with the ladder labels.
        let extra = vec![
            GeneratorInfo::nilpotent("v1c", MultiDegree::qstu(q_v1c, 0, 2, 1), 3)
                .with_alias("v1"),
            GeneratorInfo::new("v13", MultiDegree::qstu(q_v13, 0, 6, 3)),
            GeneratorInfo::new("v2l", MultiDegree::qstu(q_v2l, 0, 6, 3)).with_alias("v2"),
        ];
        extend_presentation(name, &ext_e0(field), extra, &|_| 0)
    }
}

// Shared validation for the slice builders.
fn validate_slice_request(sp: SpectrumId, n: u32) -> Result<(), InstanceError> {
    sp.validate()?;
    match sp.family {
        SpectrumFamily::Kgl => {
            if n != 1 {
                return Err(InstanceError::Unsupported {
                    spectrum: sp.name(),
                    reason: format!("kgl is a type-1 spectrum; type {n} towers are not built"),
                });
            }
        }
        SpectrumFamily::KN(m) => {
            if n == 1 && m > 1 {
                return Err(InstanceError::NotSliceable {
                    spectrum: sp.name(),
                    n,
                    reason: format!(
                        "the slices s_1..s_{} vanish between nonzero neighbors, \
                         forcing an impossible short exact sequence in homology",
                        (1 << m) - 2
                    ),
                });
            }
            if n != m {
                return Err(InstanceError::Unsupported {
                    spectrum: sp.name(),
                    reason: format!("k({m}) is served at type {m} (or the failing type 1)"),
                });
            }
        }
        SpectrumFamily::Bpgl(m) => {
            if n == 1 && m >= 2 {
                return Err(InstanceError::NotSliceable {
                    spectrum: sp.name(),
                    n,
                    reason: "the homological slice tower supports a differential \
                             past the second page"
                        .to_owned(),
                });
            }
            if n != m {
                return Err(InstanceError::Unsupported {
                    spectrum: sp.name(),
                    reason: format!("BPGL<{m}> is served at type {m} (or the failing type 1)"),
                });
            }
            if m > 2 {
                return Err(InstanceError::Unsupported {
                    spectrum: sp.name(),
                    reason: "closed band presentations are provided for m <= 2".to_owned(),
                });
            }
        }
        SpectrumFamily::Mgl => {
            return Err(InstanceError::NotSliceable {
                spectrum: sp.name(),
                n,
                reason: "the zero-slice map is not onto in homology (see the MGL \
                         diagnostic)"
                    .to_owned(),
            });
        }
        SpectrumFamily::HZ2 | SpectrumFamily::HF2 => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "Eilenberg-MacLane spectra are their own zero slice".to_owned(),
            });
        }
    }
    Ok(())
}

// Rule tables for the slice pages.  `page_of` maps a family's natural jump
// (in ordinary slices) to the page number of the chosen indexing.
fn slice_rules(
    sp: SpectrumId,
    pres: &AlgebraPresentation,
    indexing: SliceIndexing,
) -> Vec<DifferentialRule> {
    if sp.field != BaseField::R {
        // Over C there is no rho; over F_q the targets are u²-torsion with
        // exponent >= 3.  Either way the tables are empty.
        return Vec::new();
    }
    let page_of = |ordinary_jump: i32| match indexing {
        SliceIndexing::Band => 1,
        SliceIndexing::Ordinary => ordinary_jump,
    };
    match sp.family {
        SpectrumFamily::Kgl => vec![DifferentialRule::new(
            page_of(1),
            "tau2",
            1,
            pres.polynomial(&[&[("rho", 3), ("v1l", 1)]]),
            RuleMode::Leibniz,
            "slice v1-family: d(tau^2) = rho^3*v1",
        )],
        SpectrumFamily::KN(n) => {
            let rho_pow = u16::try_from((1u32 << (n + 1)) - 1).expect("small");
            vec![DifferentialRule::new(
                page_of((1 << n) - 1),
                "tau",
                1 << n,
                pres.polynomial(&[&[("rho", rho_pow), (&format!("v{n}l"), 1)]]),
                RuleMode::LinearOver(vec!["rho".to_owned(), format!("v{n}l")]),
                &format!("slice vn-family: d(tau^{}) = rho^{rho_pow}*v{n}", 1 << n),
            )]
        }
        SpectrumFamily::Bpgl(2) => vec![
            DifferentialRule::new(
                page_of(1),
                "w2",
                1,
                pres.polynomial(&[&[("rho", 3), ("v13", 1)]]),
                RuleMode::Leibniz,
                "fringe family: d([tau^2*v1^2]) = rho^3*v1^3",
            ),
            DifferentialRule::new(
                page_of(3),
                "tau4",
                1,
                pres.polynomial(&[&[("rho", 7), ("v2l", 1)]]),
                RuleMode::Leibniz,
                "slice v2-family: d(tau^4) = rho^7*v2",
            ),
        ],
        SpectrumFamily::Bpgl(1) => vec![DifferentialRule::new(
            page_of(1),
            "tau2",
            1,
            pres.polynomial(&[&[("rho", 3), ("v1l", 1)]]),
            RuleMode::Leibniz,
            "slice v1-family: d(tau^2) = rho^3*v1",
        )],
        _ => Vec::new(),
    }
}

fn build_slice_variant(
    sp: SpectrumId,
    n: u32,
    window: &DegreeWindow,
    indexing: SliceIndexing,
) -> Result<Instance, InstanceError> {
    validate_slice_request(sp, n)?;
    let (family, variant) = match indexing {
        SliceIndexing::Band => (SsFamily::SliceAlgebraic, "algebraic"),
        SliceIndexing::Ordinary => (SsFamily::SliceEffective, "effective"),
    };
    let name = format!("{variant} slice SS (type {n}) {}", sp.name());
    let pres = match sp.family {
        SpectrumFamily::Kgl | SpectrumFamily::Bpgl(1) => {
            kgl_slice_page(sp.field, indexing, &format!("E1 {name}"))?
        }
        SpectrumFamily::KN(m) => kn_slice_page(m, sp.field, indexing, &format!("E1 {name}"))?,
        SpectrumFamily::Bpgl(2) => band_page_bpgl2(sp.field, indexing, &format!("E1 {name}"))?,
        _ => unreachable!("validated above"),
    };
    let rules = slice_rules(sp, &pres, indexing);
    let table = RuleTable { rules, cone_rules: vec![] };
    let last_page = table.pages(i32::MAX).last().copied().unwrap_or(1);
    let mut page = Page::new(&name, family, 1, pres, None, window, &table, last_page)?;
    page.deficits = slice_deficits(&page.presentation);
    let mut notes = vec![match indexing {
        SliceIndexing::Band => {
            "q counts type-n bands; slice labels sit in filtration zero".to_owned()
        }
        SliceIndexing::Ordinary => {
            "q counts ordinary slices; pages follow the ordinary-slice jump".to_owned()
        }
    }];
    if sp.field != BaseField::R && matches!(sp.family, SpectrumFamily::Kgl) {
        notes.push("collapse: the slice differentials have no target over this field".to_owned());
    }
    if matches!(sp.family, SpectrumFamily::Bpgl(2)) {
        notes.push(
            "the in-band v1-family is folded into the two-band starting page; \
             the fringe rule is its residue across band boundaries"
                .to_owned(),
        );
    }
    Ok(Instance { page, table, last_page, notes })
}

/// The algebraic slice spectral sequence of `sp` at type `n`:
/// `(q,s,t,u)`-graded with `q` in type-`n` band units, `d_r` of shape
/// `(q,s,t,u) ↦ (q+r, s−r+1, t−r, u)`.
pub fn build_aesss(sp: SpectrumId, n: u32, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    build_slice_variant(sp, n, window, SliceIndexing::Band)
}

/// The effective slice spectral sequence of `sp` at type `n` in homotopy
/// indexing: `q` counts ordinary slices, `d_r` drops the stem by one and
/// raises `q` by `r`.  Slice homotopy is modeled at the collapsed Adams
/// level (integral slices contribute `v₀`-towers).
pub fn build_esss(sp: SpectrumId, n: u32, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    build_slice_variant(sp, n, window, SliceIndexing::Ordinary)
}

// ---------------------------------------------------------------------------
// homological slice spectral sequence
// ---------------------------------------------------------------------------

/// The homological slice spectral sequence of `BPGL<m>`: converges from
/// `H(HZ₂)[v₁..v_m]` to `H(BPGL<m>)`, `(t,u,q)`-graded with no filtration
/// axis; `d_r` has shape `(t,q) ↦ (t−1, q+r)`.  The rules are the
/// derivation table `d_{2^i−1}(τ̄_i) = v_i`, `i = 1..m`.
pub fn build_h_esss(
    m: u32,
    field: BaseField,
    window: &DegreeWindow,
) -> Result<Instance, InstanceError> {
    if matches!(field, BaseField::Fq(_)) {
        return Err(InstanceError::Unsupported {
            spectrum: format!("BPGL<{m}>/{field}"),
            reason: "the homological slice tower is provided over R and C \
                     (rational input is served by the R page)"
                .to_owned(),
        });
    }
    if m > 3 {
        return Err(InstanceError::Unsupported {
            spectrum: format!("BPGL<{m}>/{field}"),
            reason: "homological slice pages are provided for m <= 3".to_owned(),
        });
    }
    let name = format!("homological slice SS BPGL<{m}>/{field}");
    // Budget: products of two window monomials must normalize inside the
    // generator list, so pass twice the window's functional maximum.
    let pages: Vec<i32> = (1..=m).map(|i| (1 << i) - 1).collect();
    let pad = 1 + pages.iter().sum::<i32>().max(pages.last().copied().unwrap_or(1));
    let internal = window.padded(pad);
    let probe = a_mod_e(0, field, 1)?;
    let budget = 2 * probe.phi_max(&internal)?.max(1);
    let base = a_mod_e(0, field, budget)?;
    let extra: Vec<GeneratorInfo> = (1..=m)
        .map(|i| {
            GeneratorInfo::new(
                &format!("v{i}"),
                MultiDegree::tuq((1 << (i + 1)) - 2, (1 << i) - 1, (1 << i) - 1),
            )
        })
        .collect();
    let pres = extend_presentation(&format!("E1 {name}"), &base, extra, &|_| 0)?;
    let rules: Vec<DifferentialRule> = (1..=m)
        .map(|i| {
            let page = (1 << i) - 1;
            DifferentialRule::new(
                page,
                &format!("taubar{i}"),
                1,
                pres.polynomial(&[&[(&format!("v{i}"), 1)]]),
                RuleMode::Leibniz,
                &format!("homological slice family: d{page}(taubar{i}) = v{i}"),
            )
        })
        .collect();
    let table = RuleTable { rules, cone_rules: vec![] };
    let last_page = table.pages(i32::MAX).last().copied().unwrap_or(1);
    let page = Page::new(
        &name,
        SsFamily::SliceHomological,
        1,
        pres,
        None,
        window,
        &table,
        last_page,
    )?;
    let notes = vec![
        "grading (t,u,q): no filtration axis; the stable page matches the \
         m-th quotient of the dual Steenrod algebra"
            .to_owned(),
    ];
    Ok(Instance { page, table, last_page, notes })
}

// ---------------------------------------------------------------------------
// realized C₂ slice spectral sequence
// ---------------------------------------------------------------------------

/// Realizes the motivic data of `sp` (over `R`) as a `C₂`-equivariant slice
/// spectral sequence.
///
/// Every motivic Bockstein rule with `i ≥ 1` becomes one equivariant rule of
/// the same shape with `v_i ↦ v̄_i` (written `vbar<i>`); the `v₀`-rule has
/// no mod-2 realization and is dropped, so realized charts suppress the
/// `v₀`-towers.  For `kgl` the negative-cone module is attached and its
/// `d₃`-family is *derived* from the positive rule via the module Leibniz
/// identity ([`derive_cone_rule`]).
pub fn realize_hhr(sp: SpectrumId, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    sp.validate()?;
    if sp.field != BaseField::R {
        return Err(InstanceError::Unsupported {
            spectrum: sp.name(),
            reason: "realization reads the motivic data over R".to_owned(),
        });
    }
    let realized_name = match sp.family {
        SpectrumFamily::Kgl => "kR".to_owned(),
        SpectrumFamily::KN(n) => format!("kR({n})"),
        SpectrumFamily::Bpgl(m) => format!("BPR<{m}>"),
        _ => {
            return Err(InstanceError::Unsupported {
                spectrum: sp.name(),
                reason: "realization is provided for kgl, k(n), BPGL<m>".to_owned(),
            });
        }
    };
    // The motivic table, built on a throwaway window (only rules are read).
    let motivic = build_rho_bockstein(sp, window)?;
    let name = format!("C2 slice SS {realized_name}");

    let vbar = |i: u32| {
        GeneratorInfo::new(
            &format!("vbar{i}"),
            MultiDegree::qstu((1 << (i + 1)) - 2, 0, (1 << (i + 1)) - 2, (1 << i) - 1),
        )
    };
    let v_list: Vec<u32> = sp.family.v_indices().into_iter().filter(|&i| i >= 1).collect();
    let mut gens = vec![
        GeneratorInfo::new("tau", MultiDegree::qstu(0, 0, 0, -1)).with_alias("u_sigma"),
        GeneratorInfo::new("rho", MultiDegree::qstu(0, 1, 0, -1)).with_alias("a_sigma"),
    ];
    gens.extend(v_list.iter().map(|&i| vbar(i)));
    let pres = AlgebraPresentation::new(&format!("E1 {name}"), gens, vec![], vec![])?;

    let mut rules = Vec::new();
    for rule in &motivic.table.rules {
        // Identify the family index from the source power 2^i; drop i = 0.
        let i = rule.source_power.trailing_zeros();
        if i == 0 {
            continue;
        }
        let rho_pow = u16::try_from((1u32 << (i + 1)) - 1).expect("small");
        let target = pres.polynomial(&[&[("rho", rho_pow), (&format!("vbar{i}"), 1)]]);
        let mode = match &rule.mode {
            RuleMode::Leibniz => RuleMode::Leibniz,
            RuleMode::LinearOver(_) => {
                RuleMode::LinearOver(vec!["rho".to_owned(), format!("vbar{i}")])
            }
            RuleMode::Explicit => RuleMode::Explicit,
        };
        rules.push(DifferentialRule::new(
            rule.page,
            "tau",
            rule.source_power,
            target,
            mode,
            &format!(
                "realized from the motivic rule `{}`: v{i} becomes vbar{i}",
                rule.origin
            ),
        ));
    }
    let mut cone_rules = Vec::new();
    let cone = if sp.family == SpectrumFamily::Kgl {
        let module = NegativeConeModule::new("vbar1", MultiDegree::qstu(2, 0, 2, 1));
        let (_, _, family) = derive_cone_rule(
            &module,
            3,
            "negative-cone d3 family, derived from the positive rule via the \
             module Leibniz identity",
        );
        cone_rules.push(family);
        Some(module)
    } else {
        None
    };
    let table = RuleTable { rules, cone_rules };
    let last_page = table.pages(i32::MAX).last().copied().unwrap_or(1);
    let page = Page::new(
        &name,
        SsFamily::HhrSlice,
        1,
        pres,
        cone,
        window,
        &table,
        last_page,
    )?;
    let mut notes = vec![
        "v0-towers are suppressed: the v0-rule has no mod-2 realization".to_owned(),
        "one realized rule per motivic rule with i >= 1 (the rule-count \
         bijection holds by construction)"
            .to_owned(),
    ];
    if sp.family == SpectrumFamily::Kgl {
        notes.push("negative cone attached; its d3 family is derived, not input".to_owned());
    }
    Ok(Instance { page, table, last_page, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::apply_shift;

    fn small_window() -> DegreeWindow {
        DegreeWindow::from_ranges((0, 12), (-8, 8), (0, 8))
    }

    fn stu_dims(outcome: &RunOutcome) -> BTreeMap<MultiDegree, usize> {
        let mut out: BTreeMap<MultiDegree, usize> = BTreeMap::new();
        for (d, view) in &outcome.infinity {
            let key = MultiDegree::stu(d.s.expect("s-graded"), d.t, d.u);
            *out.entry(key).or_default() += view.dim;
        }
        out
    }

    fn golden(a: &AlgebraPresentation, w: &DegreeWindow) -> BTreeMap<MultiDegree, usize> {
        a.poincare_series(w).unwrap().into_iter().filter(|&(_, n)| n > 0).collect()
    }

    #[test]
    fn bockstein_hz2_over_r_collapses_to_the_zero_slice_ring() {
        let w = small_window();
        let inst = build_rho_bockstein(
            SpectrumId::new(SpectrumFamily::HZ2, BaseField::R),
            &w,
        )
        .unwrap();
        let (_, outcome) = inst.run().unwrap();
        assert_eq!(stu_dims(&outcome), golden(&ext_e0(BaseField::R), &w));
    }

    #[test]
    fn bockstein_kgl_over_finite_fields_matches_the_goldens() {
        let w = small_window();
        for q in [3u32, 5] {
            let inst = build_rho_bockstein(
                SpectrumId::new(SpectrumFamily::Kgl, BaseField::Fq(q)),
                &w,
            )
            .unwrap();
            let (_, outcome) = inst.run().unwrap();
            assert_eq!(
                stu_dims(&outcome),
                golden(&ext_kgl(BaseField::Fq(q)), &w),
                "q = {q}"
            );
        }
    }

    #[test]
    fn band_page_matches_the_truncated_bockstein_stable_page() {
        // The band-0 core of the BPGL<2> slice page is the stable page of
        // the v1-truncated Bockstein run (v1^3 = 0, both derivation rules),
        // after flattening the slice labels by their filtration deficits.
        let w = small_window();
        let gens = vec![
            GeneratorInfo::new("tau", MultiDegree::qstu(0, 0, 0, -1)),
            GeneratorInfo::new("rho", MultiDegree::qstu(1, 0, -1, -1)),
            GeneratorInfo::new("v0", MultiDegree::qstu(0, 1, 1, 0)),
            GeneratorInfo::nilpotent("v1", MultiDegree::qstu(0, 1, 3, 1), 3),
        ];
        let pres = AlgebraPresentation::new("truncated-BPGL1", gens, vec![], vec![]).unwrap();
        let table = RuleTable {
            rules: vec![
                DifferentialRule::new(
                    1,
                    "tau",
                    1,
                    pres.polynomial(&[&[("rho", 1), ("v0", 1)]]),
                    RuleMode::Leibniz,
                    "d1",
                ),
                DifferentialRule::new(
                    3,
                    "tau",
                    2,
                    pres.polynomial(&[&[("rho", 3), ("v1", 1)]]),
                    RuleMode::Leibniz,
                    "d3",
                ),
            ],
            cone_rules: vec![],
        };
        let page = Page::new(
            "truncated run",
            SsFamily::RhoBockstein,
            1,
            pres,
            None,
            &w,
            &table,
            3,
        )
        .unwrap();
        let (_, outcome) = crate::engine::run(page, &table, 3).unwrap();
        let run_dims = stu_dims(&outcome);

        // Core of the band page: monomials without v13/v2l, flattened.
        let band = band_page_bpgl2(BaseField::R, SliceIndexing::Band, "band").unwrap();
        let deficits = slice_deficits(&band);
        let i13 = band.gen_index("v13").unwrap();
        let i2l = band.gen_index("v2l").unwrap();
        // Enumerate with the s-range opened downward so low-filtration band
        // monomials whose flattened degree is in the window are not missed.
        let mut enum_w = w;
        enum_w.s = Some((0, w.s.unwrap().1));
        enum_w.t = Some((w.t.unwrap().0 - 4, w.t.unwrap().1));
        let mut core_dims: BTreeMap<MultiDegree, usize> = BTreeMap::new();
        for (d, mons) in band.basis_in_window(&enum_w).unwrap() {
            for m in mons {
                if m.exp(i13) > 0 || m.exp(i2l) > 0 {
                    continue;
                }
                let vdef: i32 = band
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        deficits.get(&g.name).copied().unwrap_or(0) * i32::from(m.exp(i))
                    })
                    .sum();
                let flat = MultiDegree::stu(d.s.unwrap() + vdef, d.t + vdef, d.u);
                if w.contains(&flat) {
                    *core_dims.entry(flat).or_default() += 1;
                }
            }
        }
        core_dims.retain(|_, n| *n > 0);
        assert_eq!(core_dims, run_dims);
        // Two fringe-sensitive spots: w2 (the truncation-only survivor
        // [tau^2*v1^2], deficit 2) flattens to (2,6,0) alone, and w*v1c^2
        // (= [tau^2*v0*v1^2]) to (3,7,0) — w2*v0 is truncated away there.
        let at = |s: i32, t: i32, u: i32| {
            core_dims.get(&MultiDegree::stu(s, t, u)).copied().unwrap_or(0)
        };
        assert_eq!(at(2, 6, 0), 1, "w2 = [tau^2*v1^2]");
        assert_eq!(at(3, 7, 0), 1, "w*v1c^2 = [tau^2*v0*v1^2]");
    }

    #[test]
    fn mass_scans_confirm_collapse_over_r_and_c() {
        let w = DegreeWindow::standard();
        for sp in [
            SpectrumId::new(SpectrumFamily::Kgl, BaseField::C),
            SpectrumId::new(SpectrumFamily::Kgl, BaseField::R),
            SpectrumId::new(SpectrumFamily::KN(1), BaseField::R),
            SpectrumId::new(SpectrumFamily::KN(2), BaseField::R),
        ] {
            let inst = build_mass(sp, &w).unwrap();
            assert!(inst.table.rules.is_empty());
            assert!(
                inst.notes.iter().any(|n| n.contains("no admissible nonzero targets")),
                "{}: {:?}",
                sp.name(),
                inst.notes
            );
        }
        // BPGL<2>/R has no closed-form page; its Adams input is the Bockstein
        // stable page.  Pin hand-checked dimensions: v0, v1, v2, tau^4*v0 and
        // rho*v1 survive, while at (s,t,u) = (2,6,0) all three candidate
        // monomials die — tau^2*v1^2 and tau*rho^2*v0*v2 as sources, and
        // rho^4*v1*v2 = d3(tau^2*rho*v2) as a boundary.
        let dims = mass_dims_bpgl_r(2, &DegreeWindow::from_ranges((0, 10), (-6, 6), (0, 6)))
            .unwrap();
        let at = |s: i32, t: i32, u: i32| {
            dims.get(&MultiDegree::stu(s, t, u)).copied().unwrap_or(0)
        };
        assert_eq!(at(0, 0, 0), 1);
        assert_eq!(at(1, 1, 0), 1, "v0");
        assert_eq!(at(1, 3, 1), 1, "v1");
        assert_eq!(at(1, 7, 3), 1, "v2");
        assert_eq!(at(1, 1, -4), 1, "tau^4*v0");
        assert_eq!(at(1, 2, 0), 1, "rho*v1");
        assert_eq!(at(2, 6, 0), 0, "tau^2*v1^2 dies onto the surviving rho^3*v1^3");
    }

    #[test]
    fn mass_fq_rule_tables_follow_the_arithmetic() {
        let w = DegreeWindow::standard();
        // q = 5: nu2(4) = 2, first rule d2(tau) = u*h0^2.
        let inst = build_mass_fq(
            SpectrumId::new(SpectrumFamily::Kgl, BaseField::Fq(5)),
            &w,
        )
        .unwrap();
        let r0 = &inst.table.rules[0];
        assert_eq!((r0.page, r0.source_gen.as_str(), r0.source_power), (2, "tau", 1));
        let pres = &inst.page.presentation;
        assert_eq!(r0.target, pres.polynomial(&[&[("u", 1), ("v0", 2)]]));
        // q = 9: nu2(8) = 3.
        let inst = build_mass_fq(
            SpectrumId::new(SpectrumFamily::Kgl, BaseField::Fq(9)),
            &w,
        )
        .unwrap();
        let r0 = &inst.table.rules[0];
        assert_eq!((r0.page, r0.source_power), (3, 1));
        // q = 3: nu2(9-1)... nu2(q^2-1) = nu2(8) = 3; first rule on tau^2 at
        // page 4 with target [rho*tau]*h0^4.
        let inst = build_mass_fq(
            SpectrumId::new(SpectrumFamily::Kgl, BaseField::Fq(3)),
            &w,
        )
        .unwrap();
        let r0 = &inst.table.rules[0];
        assert_eq!((r0.page, r0.source_gen.as_str(), r0.source_power), (4, "tau2", 1));
        let pres = &inst.page.presentation;
        assert_eq!(r0.target, pres.polynomial(&[&[("rhotau", 1), ("v0", 4)]]));
        // k(n) over F_q collapses.
        let inst = build_mass_fq(
            SpectrumId::new(SpectrumFamily::KN(1), BaseField::Fq(5)),
            &w,
        )
        .unwrap();
        assert!(inst.table.rules.is_empty());
    }

    #[test]
    fn slice_rule_shapes_are_homogeneous() {
        // Engine-level validation would catch these at run time; this test
        // pins the conventions at build time for every supported instance.
        let w = small_window();
        let cases: Vec<Instance> = vec![
            build_aesss(SpectrumId::new(SpectrumFamily::Kgl, BaseField::R), 1, &w).unwrap(),
            build_esss(SpectrumId::new(SpectrumFamily::Kgl, BaseField::R), 1, &w).unwrap(),
            build_aesss(SpectrumId::new(SpectrumFamily::KN(2), BaseField::R), 2, &w).unwrap(),
            build_esss(SpectrumId::new(SpectrumFamily::KN(2), BaseField::R), 2, &w).unwrap(),
            build_aesss(SpectrumId::new(SpectrumFamily::Bpgl(2), BaseField::R), 2, &w).unwrap(),
            build_esss(SpectrumId::new(SpectrumFamily::Bpgl(2), BaseField::R), 2, &w).unwrap(),
        ];
        for inst in cases {
            let pres = &inst.page.presentation;
            for rule in &inst.table.rules {
                let gi = pres.gen_index(&rule.source_gen).unwrap();
                let src = Monomial::single(pres.ngens(), gi, rule.source_power);
                let src_deg = pres.degree_of(&src).unwrap();
                let expected = apply_shift(&src_deg, inst.page.family.shift(rule.page));
                for t in rule.target.iter() {
                    assert_eq!(
                        pres.degree_of(t).unwrap(),
                        expected,
                        "{}: rule {}",
                        inst.page.name,
                        rule.origin
                    );
                }
            }
        }
    }

    #[test]
    fn kgl_square_paths_agree_on_stem_weight_dims() {
        let w = small_window();
        let left = build_aesss(SpectrumId::new(SpectrumFamily::Kgl, BaseField::R), 1, &w)
            .unwrap()
            .run()
            .unwrap()
            .1;
        let right = build_esss(SpectrumId::new(SpectrumFamily::Kgl, BaseField::R), 1, &w)
            .unwrap()
            .run()
            .unwrap()
            .1;
        let collapse = |o: &RunOutcome| {
            let mut out: BTreeMap<(i32, i32), usize> = BTreeMap::new();
            for (d, view) in &o.infinity {
                *out.entry((d.stem_or_t(), d.u)).or_default() += view.dim;
            }
            out
        };
        assert_eq!(collapse(&left), collapse(&right));
    }

    #[test]
    fn h_esss_stable_page_is_the_next_steenrod_quotient() {
        let w = DegreeWindow {
            s: None,
            t: Some((0, 10)),
            u: Some((-4, 6)),
            q: None,
            stem: None,
        };
        for field in [BaseField::R, BaseField::C] {
            let inst = build_h_esss(1, field, &w).unwrap();
            let (_, outcome) = inst.run().unwrap();
            let mut dims: BTreeMap<MultiDegree, usize> = BTreeMap::new();
            for (d, view) in &outcome.infinity {
                assert_eq!(d.q, Some(0), "v-free stable page over {field}");
                *dims.entry(MultiDegree::tu(d.t, d.u)).or_default() += view.dim;
            }
            let budget = 2 * a_mod_e(1, field, 1).unwrap().phi_max(&w.padded(2)).unwrap();
            let want = golden(&a_mod_e(1, field, budget).unwrap(), &w);
            assert_eq!(dims, want, "field {field}");
        }
    }

    #[test]
    fn realized_tables_mirror_the_motivic_ones() {
        let w = hhr_window();
        let kr = realize_hhr(SpectrumId::new(SpectrumFamily::Kgl, BaseField::R), &w).unwrap();
        assert_eq!(kr.table.rules.len(), 1, "kgl d1 dropped, d3 kept");
        let r = &kr.table.rules[0];
        assert_eq!((r.page, r.source_power), (3, 2));
        assert_eq!(r.mode, RuleMode::Leibniz);
        let pres = &kr.page.presentation;
        assert_eq!(r.target, pres.polynomial(&[&[("rho", 3), ("vbar1", 1)]]));
        assert_eq!(kr.table.cone_rules.len(), 1);
        // k(1): same page, linear mode.
        let k1 = realize_hhr(SpectrumId::new(SpectrumFamily::KN(1), BaseField::R), &w).unwrap();
        assert_eq!(k1.table.rules.len(), 1);
        assert!(matches!(k1.table.rules[0].mode, RuleMode::LinearOver(_)));
        assert!(k1.table.cone_rules.is_empty());
        // BPR<2>: two rules (i = 1, 2).
        let b2 = realize_hhr(SpectrumId::new(SpectrumFamily::Bpgl(2), BaseField::R), &w).unwrap();
        let pages: Vec<i32> = b2.table.rules.iter().map(|r| r.page).collect();
        assert_eq!(pages, vec![3, 7]);
    }

    #[test]
    fn slice_data_exposes_the_kn_gap() {
        let sp = SpectrumId::new(SpectrumFamily::KN(2), BaseField::R);
        let d = slice_data(sp, 1, 6).unwrap();
        assert!(!d.summands[&0].is_empty());
        assert!(d.summands[&1].is_empty(), "s_1 k(2) = 0");
        assert!(d.summands[&2].is_empty(), "s_2 k(2) = 0");
        assert!(!d.summands[&3].is_empty(), "s_3 k(2) = Sigma HF2 v2");
        // Type 2: every index is populated.
        let d = slice_data(sp, 2, 4).unwrap();
        assert!(d.summands.values().all(|v| !v.is_empty()));
        // BPGL<2> type 1 has multiple summands at q = 3: v1^3 and v2.
        let d = slice_data(
            SpectrumId::new(SpectrumFamily::Bpgl(2), BaseField::R),
            1,
            4,
        )
        .unwrap();
        assert_eq!(d.summands[&3].len(), 2);
    }

    #[test]
    fn unsupported_and_unsliceable_requests_error() {
        let w = small_window();
        let e = build_aesss(SpectrumId::new(SpectrumFamily::KN(2), BaseField::R), 1, &w);
        assert!(matches!(e, Err(InstanceError::NotSliceable { .. })));
        let e = build_aesss(SpectrumId::new(SpectrumFamily::Bpgl(2), BaseField::R), 1, &w);
        assert!(matches!(e, Err(InstanceError::NotSliceable { .. })));
        let e = build_aesss(SpectrumId::new(SpectrumFamily::Bpgl(3), BaseField::R), 3, &w);
        assert!(matches!(e, Err(InstanceError::Unsupported { .. })));
        let e = build_rho_bockstein(SpectrumId::new(SpectrumFamily::Kgl, BaseField::C), &w);
        assert!(matches!(e, Err(InstanceError::Unsupported { .. })));
        assert!(SpectrumFamily::parse("k2") == Some(SpectrumFamily::KN(2)));
        assert!(SpectrumFamily::parse("bpgl2") == Some(SpectrumFamily::Bpgl(2)));
    }
}
