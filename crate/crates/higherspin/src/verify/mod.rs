//! Identity verification: every identity in the calculus as a named,
//! parameterized, exactly decidable check over generated test bases.
//!
//! A check applies the two sides of an identity to a finite family of test
//! functions `x^α · b(u) · e_A` — monomials in x up to a documented degree,
//! `b` running over a basis of the required value space in u, `e_A` over a
//! small set of probe blades on the right — and passes only when every
//! residual canonicalizes to zero. Right blade factors exercise
//! noncommutative coefficients; because every primitive operator acts by
//! left multiplication or differentiation, right multiplication by a
//! constant blade commutes with all of them, so a small probe set carries
//! the same information as the full 2^m sweep.
//!
//! Each suite contains a mutation control — a deliberately perturbed
//! identity that must fail — so a vacuous test family cannot silently pass.

mod checks;
pub mod report;

pub use report::{CheckRecord, GridSpec, ParamPoint, Status, VerificationReport, Witness};

use std::time::Instant;

use crate::clifford::Blade;
use crate::error::{Error, Result};
use crate::ops::{apply, OperatorExpr};
use crate::scalar::Rat;
use crate::spaces::{harmonic_basis, monogenic_basis, monomial_basis, SpaceParams};
use crate::util::par_map;
use crate::weighted::{Var, WeightedFunction};

type Wf = WeightedFunction<Rat>;

/// Coefficient mode for a run. Floating mode exists for scale benchmarks
/// only: residual zero-tests use a tolerance there and never gate anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Configuration of a verification run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suites: Vec<String>,
    pub ms: Vec<u32>,
    pub ks: Vec<u32>,
    pub max_x_degree: u32,
    pub seed: u64,
    pub workers: usize,
    pub mode: Mode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: vec!["all".into()],
            ms: vec![3, 4, 5],
            ks: vec![0, 1, 2],
            max_x_degree: 3,
            seed: 0,
            workers: crate::util::default_workers(),
            mode: Mode::Exact,
        }
    }
}

/// Which value space the u-slot of the test functions runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueSpace {
    /// Constants in u.
    UConstant,
    /// All degree-k polynomials.
    Pk,
    /// Harmonic degree-k polynomials.
    Hk,
    /// Monogenic degree-k polynomials.
    Mk,
    /// Harmonic polynomials of degree k-1.
    HkMinus1,
    /// `u ·` monogenic polynomials of degree k-1.
    UMkMinus1,
}

impl ValueSpace {
    pub fn label(self) -> &'static str {
        match self {
            ValueSpace::UConstant => "constants",
            ValueSpace::Pk => "P_k",
            ValueSpace::Hk => "H_k",
            ValueSpace::Mk => "M_k",
            ValueSpace::HkMinus1 => "H_{k-1}",
            ValueSpace::UMkMinus1 => "u M_{k-1}",
        }
    }
}

/// Basis of the requested value space in u.
pub fn value_basis(space: ValueSpace, params: SpaceParams) -> Result<Vec<Wf>> {
    let m = params.m;
    match space {
        ValueSpace::UConstant => Ok(vec![Wf::one(m)]),
        ValueSpace::Pk => Ok(monomial_basis(params).elements().to_vec()),
        ValueSpace::Hk => Ok(harmonic_basis(params).elements().to_vec()),
        ValueSpace::Mk => Ok(monogenic_basis(params)?.elements().to_vec()),
        ValueSpace::HkMinus1 => {
            if params.k == 0 {
                return Err(Error::InvalidParams {
                    detail: "requires k >= 1 (value space in degree k-1)".into(),
                });
            }
            Ok(harmonic_basis(SpaceParams::new(m, params.k - 1)?)
                .elements()
                .to_vec())
        }
        ValueSpace::UMkMinus1 => {
            if params.k == 0 {
                return Err(Error::InvalidParams {
                    detail: "requires k >= 1 (value space in degree k-1)".into(),
                });
            }
            let lower = monogenic_basis(SpaceParams::new(m, params.k - 1)?)?;
            Ok(lower
                .elements()
                .iter()
                .map(|p| p.mul_vector_left(Var::U))
                .collect())
        }
    }
}

/// Probe blades for right multiplication: scalar, one vector, one bivector.
pub fn probe_blades(m: u32) -> Vec<Blade> {
    let mut out = vec![Blade::SCALAR];
    out.push(Blade::generator(m as usize));
    if m >= 2 {
        out.push(Blade::from_indices(&[1, 2], m).expect("bivector"));
    }
    out
}

/// The test family `x^α · b(u) · e_A` with `|α| <= max_x_degree`.
pub fn test_functions(
    params: SpaceParams,
    space: ValueSpace,
    max_x_degree: u32,
) -> Result<Vec<Wf>> {
    let m = params.m;
    let basis = value_basis(space, params)?;
    let blades = probe_blades(m);
    let mut monos: Vec<Wf> = Vec::new();
    for d in 0..=max_x_degree {
        for exps in crate::spaces::monomial_exponents(m, d) {
            let mut idx = crate::weighted::MultiIndex::empty(m);
            for (i, &e) in exps.iter().enumerate() {
                idx = idx.with_exponent(Var::X(i + 1), e);
            }
            monos.push(Wf::term(m, 0, idx, crate::clifford::Multivector::one(m)));
        }
    }
    let mut out = Vec::with_capacity(monos.len() * basis.len() * blades.len());
    for mono in &monos {
        for b in &basis {
            let core = mono.mul(b);
            for blade in &blades {
                out.push(
                    core.mul_clifford_right(&crate::clifford::Multivector::blade(
                        m,
                        *blade,
                        crate::scalar::int(1),
                    )),
                );
            }
        }
    }
    Ok(out)
}

/// Whether a check runs once per (m, k) point or once per m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    PerMk,
    PerM,
}

/// How a check participates in the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Must pass.
    Assert,
    /// A deliberately broken identity that must fail (guards against
    /// vacuous suites).
    Control,
    /// Measured and reported, never gating.
    Observe,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Assert => "assert",
            CheckKind::Control => "control",
            CheckKind::Observe => "observe",
        }
    }
}

/// Result of one runner invocation.
pub struct RunOutcome {
    pub status: Status,
    pub witness: Option<Witness>,
    pub note: Option<String>,
    pub tested: usize,
    pub x_degree: Option<u32>,
    pub decides: Option<bool>,
}

impl RunOutcome {
    pub fn skip(reason: String) -> Self {
        RunOutcome {
            status: Status::Skip,
            witness: None,
            note: Some(reason),
            tested: 0,
            x_degree: None,
            decides: None,
        }
    }

    pub fn pass(tested: usize) -> Self {
        RunOutcome {
            status: Status::Pass,
            witness: None,
            note: None,
            tested,
            x_degree: None,
            decides: None,
        }
    }

    pub fn fail(witness: Option<Witness>, note: Option<String>, tested: usize) -> Self {
        RunOutcome {
            status: Status::Fail,
            witness,
            note,
            tested,
            x_degree: None,
            decides: None,
        }
    }
}

/// Execution context handed to runners.
pub struct RunCtx {
    pub workers: usize,
    pub seed: u64,
    pub max_x_degree: u32,
    pub mode: Mode,
}

pub(crate) type Runner = Box<dyn Fn(&RunCtx, SpaceParams) -> RunOutcome + Send + Sync>;

/// A registered check.
pub struct CheckDef {
    pub name: &'static str,
    pub suite: &'static str,
    pub anchor: &'static str,
    pub kind: CheckKind,
    pub scope: Scope,
    pub(crate) runner: Runner,
}

/// Catalog entry (serializable view of a check definition).
#[derive(Debug, Clone, serde::Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub suite: &'static str,
    pub anchor: &'static str,
    pub kind: &'static str,
}

/// Every registered check.
pub fn catalog() -> Vec<CatalogEntry> {
    checks::registry()
        .iter()
        .map(|c| CatalogEntry {
            name: c.name,
            suite: c.suite,
            anchor: c.anchor,
            kind: c.kind.as_str(),
        })
        .collect()
}

/// All suite names, in registry order.
pub fn suite_names() -> Vec<&'static str> {
    let mut names = Vec::new();
    for c in checks::registry() {
        if !names.contains(&c.suite) {
            names.push(c.suite);
        }
    }
    names
}

/// Run the selected suites over the parameter grid.
pub fn run_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let registry = checks::registry();
    let known = suite_names();
    let run_all = cfg.suites.iter().any(|s| s == "all");
    for s in &cfg.suites {
        if s != "all" && !known.contains(&s.as_str()) {
            return Err(Error::InvalidParams {
                detail: format!("unknown suite `{s}` (available: all, {})", known.join(", ")),
            });
        }
    }
    let ctx = RunCtx {
        workers: cfg.workers.max(1),
        seed: cfg.seed,
        max_x_degree: cfg.max_x_degree,
        mode: cfg.mode,
    };
    let mut records = Vec::new();
    let first_k = cfg.ks.first().copied().unwrap_or(0);
    for check in &registry {
        if !run_all && !cfg.suites.iter().any(|s| s == check.suite) {
            continue;
        }
        for &m in &cfg.ms {
            for &k in &cfg.ks {
                if check.scope == Scope::PerM && k != first_k {
                    continue;
                }
                let params = SpaceParams::new(m, k)?;
                let start = Instant::now();
                let outcome = (check.runner)(&ctx, params);
                let millis = start.elapsed().as_millis();
                records.push(CheckRecord {
                    name: check.name.to_string(),
                    suite: check.suite.to_string(),
                    anchor: check.anchor.to_string(),
                    params: ParamPoint { m, k },
                    status: outcome.status,
                    witness: outcome.witness,
                    note: outcome.note,
                    tested: outcome.tested,
                    x_degree: outcome.x_degree,
                    decides_operator_equality: outcome.decides,
                    millis,
                });
            }
        }
    }
    records.sort_by(|a, b| {
        (a.name.as_str(), a.params.m, a.params.k).cmp(&(b.name.as_str(), b.params.m, b.params.k))
    });
    Ok(VerificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        mode: cfg.mode.as_str().to_string(),
        grid: GridSpec {
            ms: cfg.ms.clone(),
            ks: cfg.ks.clone(),
            max_x_degree: cfg.max_x_degree,
            seed: cfg.seed,
        },
        suites: if run_all {
            vec!["all".into()]
        } else {
            cfg.suites.clone()
        },
        checks: records,
    })
}

// ---------------------------------------------------------------------------
// Shared runner helpers (used by the registry in `checks`)
// ---------------------------------------------------------------------------

/// Map a builder error to an outcome: vanishing denominators and parameter
/// restrictions are loud skips, anything else is a failure.
pub(crate) fn error_outcome(e: Error) -> RunOutcome {
    match e {
        Error::VanishingDenominator { .. } | Error::InvalidParams { .. } => {
            RunOutcome::skip(format!("skipped: {e}"))
        }
        other => RunOutcome::fail(None, Some(format!("builder error: {other}")), 0),
    }
}

/// Evaluate `lhs - rhs` on the family, in parallel, returning the first
/// nonzero residual in deterministic order.
pub(crate) fn first_residual(
    ctx: &RunCtx,
    lhs: &OperatorExpr,
    rhs: &OperatorExpr,
    fs: &[Wf],
) -> Option<Witness> {
    match ctx.mode {
        Mode::Exact => {
            let results = par_map(fs.to_vec(), ctx.workers, |f| {
                let r = apply(lhs, f).sub(&apply(rhs, f));
                if r.is_zero() {
                    None
                } else {
                    Some(Witness {
                        input: f.render(),
                        residual: r.render(),
                    })
                }
            });
            results.into_iter().flatten().next()
        }
        Mode::Float => {
            let results = par_map(fs.to_vec(), ctx.workers, |f| {
                let g: WeightedFunction<f64> = f.convert();
                let r = apply::<f64>(lhs, &g).sub(&apply::<f64>(rhs, &g));
                if r.is_zero() {
                    None
                } else {
                    Some(Witness {
                        input: f.render(),
                        residual: "nonzero residual in floating mode".into(),
                    })
                }
            });
            results.into_iter().flatten().next()
        }
    }
}

/// Declarative operator identity `lhs(params) = rhs(params)` on one value
/// space. Identities quantified over axes use [`SharedCommutator`] instead.
pub(crate) struct OpIdentity {
    pub space: ValueSpace,
    /// x-order of the residual after normal ordering; the sweep decides
    /// operator equality when the tested degree reaches this.
    pub required_degree: u32,
    pub build: Box<dyn Fn(SpaceParams) -> Result<(OperatorExpr, OperatorExpr)> + Send + Sync>,
}

/// The x-degree swept with the full test family. Fourth-order residuals
/// drop one degree relative to the configured sweep, but never below 3:
/// every term of the fourth-order operator carries exactly four
/// x-derivatives, so sweeps below degree 3 are vacuous (both sides vanish
/// identically) and would let mutants through.
pub(crate) fn degree_for(ctx: &RunCtx, required: u32) -> u32 {
    if required >= 4 {
        ctx.max_x_degree.saturating_sub(1).max(3)
    } else {
        ctx.max_x_degree
    }
}

/// A reduced test family for the non-vacuity sweep of fourth-order
/// identities: all x-monomials up to `degree`, the first few value-space
/// basis elements, two probe blades.
pub(crate) fn thin_test_functions(
    params: SpaceParams,
    space: ValueSpace,
    degree: u32,
) -> Result<Vec<Wf>> {
    let m = params.m;
    let basis = value_basis(space, params)?;
    let basis: Vec<Wf> = basis.into_iter().take(3).collect();
    let blades = {
        let mut b = vec![Blade::SCALAR];
        if m >= 2 {
            b.push(Blade::from_indices(&[1, 2], m).expect("bivector"));
        }
        b
    };
    let mut out = Vec::new();
    for d in 0..=degree {
        for exps in crate::spaces::monomial_exponents(m, d) {
            let mut idx = crate::weighted::MultiIndex::empty(m);
            for (i, &e) in exps.iter().enumerate() {
                idx = idx.with_exponent(Var::X(i + 1), e);
            }
            let mono = Wf::term(m, 0, idx, crate::clifford::Multivector::one(m));
            for b in &basis {
                let core = mono.mul(b);
                for blade in &blades {
                    out.push(
                        core.mul_clifford_right(&crate::clifford::Multivector::blade(
                            m,
                            *blade,
                            crate::scalar::int(1),
                        )),
                    );
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn run_op_identity(idy: &OpIdentity, ctx: &RunCtx, params: SpaceParams) -> RunOutcome {
    let deg = degree_for(ctx, idy.required_degree);
    let mut fs = match test_functions(params, idy.space, deg) {
        Ok(fs) => fs,
        Err(e) => return error_outcome(e),
    };
    if fs.is_empty() {
        return RunOutcome {
            status: Status::Fail,
            witness: None,
            note: Some("no test functions generated".into()),
            tested: 0,
            x_degree: Some(deg),
            decides: None,
        };
    }
    // Fourth-order identities additionally get a reduced sweep at the degree
    // where the higher-order operator stops annihilating every test input.
    let mut note = None;
    if deg < idy.required_degree {
        match thin_test_functions(params, idy.space, idy.required_degree) {
            Ok(extra) => fs.extend(extra),
            Err(e) => return error_outcome(e),
        }
        note = Some(format!(
            "full family swept to x-degree {deg}; reduced family additionally swept to degree {}",
            idy.required_degree
        ));
    }
    let (lhs, rhs) = match (idy.build)(params) {
        Ok(x) => x,
        Err(e) => return error_outcome(e),
    };
    let tested = fs.len();
    if let Some(w) = first_residual(ctx, &lhs, &rhs, &fs) {
        return RunOutcome {
            status: Status::Fail,
            witness: Some(w),
            note,
            tested,
            x_degree: Some(deg),
            decides: Some(deg >= idy.required_degree),
        };
    }
    RunOutcome {
        status: Status::Pass,
        witness: None,
        note,
        tested,
        x_degree: Some(deg),
        decides: Some(deg >= idy.required_degree),
    }
}

/// What the per-axis right-hand side operator is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RhsTarget {
    /// `R_axis` acts on the test function f.
    Input,
    /// `R_axis` acts on the shared evaluation `A f` (cheap multiplications
    /// like `6 x_j ·` reuse the heavy operator output).
    OpOutput,
}

/// Commutator-style identity `[A, B_axis] = R_axis` sharing the expensive
/// `A f` evaluation across axes: per test function the runner computes
/// `A f` once and then, per axis, `A(B f) - B(A f) - R(target)`.
pub(crate) struct SharedCommutator {
    pub space: ValueSpace,
    pub required_degree: u32,
    /// The heavy axis-independent operator A.
    pub op: Box<dyn Fn(SpaceParams) -> Result<OperatorExpr> + Send + Sync>,
    /// Axis indices the identity quantifies over.
    pub axes: Box<dyn Fn(SpaceParams) -> Vec<usize> + Send + Sync>,
    /// The generator B for one axis.
    pub gen: Box<dyn Fn(SpaceParams, usize) -> Result<OperatorExpr> + Send + Sync>,
    /// The right-hand side R for one axis.
    pub rhs: Box<dyn Fn(SpaceParams, usize) -> Result<OperatorExpr> + Send + Sync>,
    pub rhs_target: RhsTarget,
}

pub(crate) fn run_shared_commutator(
    spec: &SharedCommutator,
    ctx: &RunCtx,
    params: SpaceParams,
    control_label: Option<&str>,
) -> RunOutcome {
    let deg = degree_for(ctx, spec.required_degree);
    let op = match (spec.op)(params) {
        Ok(x) => x,
        Err(e) => return error_outcome(e),
    };
    let axes = (spec.axes)(params);
    let mut gens = Vec::with_capacity(axes.len());
    let mut rhss = Vec::with_capacity(axes.len());
    for &a in &axes {
        match ((spec.gen)(params, a), (spec.rhs)(params, a)) {
            (Ok(g), Ok(r)) => {
                gens.push(g);
                rhss.push(r);
            }
            (Err(e), _) | (_, Err(e)) => return error_outcome(e),
        }
    }
    let mut fs = match test_functions(params, spec.space, deg) {
        Ok(fs) => fs,
        Err(e) => return error_outcome(e),
    };
    let mut note = None;
    if deg < spec.required_degree {
        match thin_test_functions(params, spec.space, spec.required_degree) {
            Ok(extra) => fs.extend(extra),
            Err(e) => return error_outcome(e),
        }
        note = Some(format!(
            "full family swept to x-degree {deg}; reduced family additionally swept to degree {}",
            spec.required_degree
        ));
    }
    if fs.is_empty() {
        return RunOutcome::fail(None, Some("no test functions generated".into()), 0);
    }
    let tested = fs.len() * axes.len();
    let hits = par_map(fs, ctx.workers, |f| {
        exact_or_float_commutator(ctx, &op, &gens, &rhss, spec.rhs_target, f)
    });
    let first = hits.into_iter().flatten().next();
    match (first, control_label) {
        (None, None) => RunOutcome {
            status: Status::Pass,
            witness: None,
            note,
            tested,
            x_degree: Some(deg),
            decides: Some(deg >= spec.required_degree),
        },
        (Some(w), None) => RunOutcome {
            status: Status::Fail,
            witness: Some(w),
            note,
            tested,
            x_degree: Some(deg),
            decides: Some(deg >= spec.required_degree),
        },
        (Some(_), Some(label)) => RunOutcome {
            status: Status::Pass,
            witness: None,
            note: Some(format!("mutation control: {label} correctly rejected")),
            tested,
            x_degree: Some(deg),
            decides: None,
        },
        (None, Some(label)) => RunOutcome {
            status: Status::Fail,
            witness: None,
            note: Some(format!(
                "mutation control NOT detected: {label} passed on every test function"
            )),
            tested,
            x_degree: Some(deg),
            decides: None,
        },
    }
}

fn exact_or_float_commutator(
    ctx: &RunCtx,
    op: &OperatorExpr,
    gens: &[OperatorExpr],
    rhss: &[OperatorExpr],
    rhs_target: RhsTarget,
    f: &Wf,
) -> Option<Witness> {
    fn residuals<C: crate::scalar::Coeff>(
        op: &OperatorExpr,
        gens: &[OperatorExpr],
        rhss: &[OperatorExpr],
        rhs_target: RhsTarget,
        f: &WeightedFunction<C>,
    ) -> Option<WeightedFunction<C>> {
        let af = apply(op, f);
        for (g, r) in gens.iter().zip(rhss) {
            let rhs_val = match rhs_target {
                RhsTarget::Input => apply(r, f),
                RhsTarget::OpOutput => apply(r, &af),
            };
            let residual = apply(op, &apply(g, f)).sub(&apply(g, &af)).sub(&rhs_val);
            if !residual.is_zero() {
                return Some(residual);
            }
        }
        None
    }
    match ctx.mode {
        Mode::Exact => residuals(op, gens, rhss, rhs_target, f).map(|r| Witness {
            input: f.render(),
            residual: r.render(),
        }),
        Mode::Float => {
            let ff: WeightedFunction<f64> = f.convert();
            residuals(op, gens, rhss, rhs_target, &ff).map(|_| Witness {
                input: f.render(),
                residual: "nonzero residual in floating mode".into(),
            })
        }
    }
}

/// Same loop, but the identity is expected to fail somewhere (mutation
/// control): passing means the mutant was detected.
pub(crate) fn run_mutation_control(
    idy: &OpIdentity,
    ctx: &RunCtx,
    params: SpaceParams,
    label: &str,
) -> RunOutcome {
    let deg = degree_for(ctx, idy.required_degree);
    let mut fs = match test_functions(params, idy.space, deg) {
        Ok(fs) => fs,
        Err(e) => return error_outcome(e),
    };
    if deg < idy.required_degree {
        match thin_test_functions(params, idy.space, idy.required_degree) {
            Ok(extra) => fs.extend(extra),
            Err(e) => return error_outcome(e),
        }
    }
    let (lhs, rhs) = match (idy.build)(params) {
        Ok(x) => x,
        Err(e) => return error_outcome(e),
    };
    let tested = fs.len();
    if first_residual(ctx, &lhs, &rhs, &fs).is_some() {
        return RunOutcome {
            status: Status::Pass,
            witness: None,
            note: Some(format!("mutation control: {label} correctly rejected")),
            tested,
            x_degree: Some(deg),
            decides: None,
        };
    }
    RunOutcome {
        status: Status::Fail,
        witness: None,
        note: Some(format!(
            "mutation control NOT detected: {label} passed on every test function"
        )),
        tested,
        x_degree: Some(deg),
        decides: None,
    }
}
