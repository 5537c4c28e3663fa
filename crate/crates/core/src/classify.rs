//! Singular traceability.
//!
//! An operator is singularly traceable exactly when any one of these holds:
//!
//! 1. `δ̲ ≤ 1 ≤ δ̄` for its Matuszewska indices;
//! 2. `liminf_{x→∞} x μ(x) / S(x) = 0`;
//! 3. 1 is a limit point of `S(λx) / S(x)` as `x → ∞`, for one (hence every) `λ > 1`.
//!
//! Criteria 2 and 3 are limit statements and are checked on the three dyadic
//! windows `[T/8, T/4]`, `[T/4, T/2]`, `[T/2, T]` of a horizon `T` in `t = ln x`.
//! A limit point has to show up in every window, since oscillating functions
//! only come close to it from time to time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{EigenvalueFunction, Profile};
use crate::grid;
use crate::ideals::{kernel_of, principal_of, IdealConfig, IdealDecision, Membership};
use crate::indices::{indices_of, regularity_of, EstimatorConfig, IndexMode, MatuszewskaReport, INDEX_BAND};
use crate::integral::{check_lambda, ln_mu_over_s, ln_s_ratio, trace_class_of, Branch, TraceClass, TraceClassVerdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionConfig {
    /// Horizon `T` in t-coordinates for functions without an intrinsic one.
    pub horizon: f64,
    /// Closeness threshold θ.
    pub theta: f64,
    pub points_per_window: usize,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self { horizon: 4000.0, theta: 0.01, points_per_window: 512 }
    }
}

impl CriterionConfig {
    fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("criteria horizon must be positive, got {}", self.horizon)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidConfig(format!("θ must lie in (0, 1), got {}", self.theta)));
        }
        if self.points_per_window < 2 {
            return Err(Error::InvalidConfig("need at least 2 points per window".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub estimator: EstimatorConfig,
    pub criteria: CriterionConfig,
    pub ideals: IdealConfig,
    pub lambda: f64,
    /// Largest `δ̄ - δ̲` accepted as regular for estimated indices.
    pub regularity_tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            estimator: EstimatorConfig::default(),
            criteria: CriterionConfig::default(),
            ideals: IdealConfig::default(),
            lambda: 2.0,
            regularity_tol: INDEX_BAND,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Traceable {
    True,
    False,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Indices,
    Liminf,
    RatioLimitPoint,
}

/// A named number supporting a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub name: String,
    #[serde(with = "crate::serde_ext")]
    pub value: f64,
}

fn evidence(name: impl Into<String>, value: f64) -> Evidence {
    Evidence { name: name.into(), value }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceabilityVerdict {
    pub traceable: Traceable,
    pub criterion: Criterion,
    pub evidence: Vec<Evidence>,
    pub horizon_limited: bool,
    pub finite_rank: bool,
}

impl TraceabilityVerdict {
    fn new(traceable: Traceable, criterion: Criterion, evidence: Vec<Evidence>, p: &Profile) -> Self {
        Self { traceable, criterion, evidence, horizon_limited: p.horizon().is_some(), finite_rank: p.is_finite_rank() }
    }
}

/// `δ̲ ≤ 1 ≤ δ̄`. Estimated indices within the band around 1 give no verdict.
pub fn traceable_by_indices(mu: &EigenvalueFunction, cfg: &EstimatorConfig) -> Result<TraceabilityVerdict> {
    let report = indices_of(mu.profile(), cfg)?;
    Ok(indices_verdict(mu.profile(), &report))
}

fn indices_verdict(p: &Profile, report: &MatuszewskaReport) -> TraceabilityVerdict {
    let (lo, hi) = (report.delta_lower, report.delta_upper);
    let ev = vec![evidence("delta_lower", lo), evidence("delta_upper", hi)];
    let verdict = if report.finite_rank {
        Traceable::False
    } else if report.mode == IndexMode::Exact {
        if lo <= 1.0 && 1.0 <= hi {
            Traceable::True
        } else {
            Traceable::False
        }
    } else if lo <= 1.0 - INDEX_BAND && hi >= 1.0 + INDEX_BAND {
        Traceable::True
    } else if lo > 1.0 + INDEX_BAND || hi < 1.0 - INDEX_BAND {
        Traceable::False
    } else {
        Traceable::Undecided
    };
    TraceabilityVerdict::new(verdict, Criterion::Indices, ev, p)
}

/// Window grids for the limit criteria: uniform points plus the jumps of a
/// piecewise-constant `g`, where the criteria quantities are extremal.
/// `reach` is how far past a point the quantity looks.
fn windows(p: &Profile, cfg: &CriterionConfig, reach: f64) -> Vec<Vec<f64>> {
    let horizon = p.horizon().unwrap_or(cfg.horizon);
    let jumps = p.g_breakpoints().unwrap_or_default();
    grid::dyadic_windows(horizon)
        .iter()
        .map(|&(lo, hi)| {
            let pts = grid::uniform(lo, hi, cfg.points_per_window);
            let mut pts = grid::merged(pts, jumps.iter().copied(), lo, hi);
            // nothing is known at or past an intrinsic horizon
            if let Some(end) = p.horizon() {
                pts.retain(|&t| t + reach < end);
            }
            pts
        })
        .collect()
}

/// Branch for the limit criteria, or the verdict when there is nothing to compute.
fn limit_branch(p: &Profile, criterion: Criterion) -> std::result::Result<Branch, TraceabilityVerdict> {
    if p.is_finite_rank() {
        return Err(TraceabilityVerdict::new(Traceable::False, criterion, vec![], p));
    }
    let tc = trace_class_of(p);
    tc.branch().map_err(|_| TraceabilityVerdict::new(Traceable::Undecided, criterion, vec![], p))
}

/// `liminf x μ(x) / S(x) = 0`.
///
/// True when the minimum over the last window is below θ and the window minima
/// do not increase; false when the last minimum is at least θ and has not
/// dropped by more than 10% from the previous window.
pub fn traceable_by_liminf(mu: &EigenvalueFunction, cfg: &CriterionConfig) -> Result<TraceabilityVerdict> {
    cfg.validate()?;
    let p = mu.profile();
    let br = match limit_branch(p, Criterion::Liminf) {
        Ok(br) => br,
        Err(v) => return Ok(v),
    };
    let mut minima = Vec::new();
    for pts in windows(p, cfg, 0.0) {
        let mut m = f64::INFINITY;
        for &t in &pts {
            m = m.min(ln_mu_over_s(p, br, t)?.exp());
        }
        minima.push(m);
    }
    let (m1, m2) = (minima[1], minima[2]);
    let verdict = if m2 < cfg.theta && minima.windows(2).all(|w| w[1] <= w[0]) {
        Traceable::True
    } else if m2 >= cfg.theta && m2 >= 0.9 * m1 {
        Traceable::False
    } else {
        Traceable::Undecided
    };
    let ev = minima.iter().enumerate().map(|(i, &m)| evidence(format!("window_{}_min", i + 1), m)).collect();
    Ok(TraceabilityVerdict::new(verdict, Criterion::Liminf, ev, p))
}

/// 1 is a limit point of `S(λx) / S(x)`.
///
/// True when every window has a point with `|ratio - 1| < θ`; false when no
/// window has one and the distance is not shrinking.
pub fn traceable_by_ratio(mu: &EigenvalueFunction, lambda: f64, cfg: &CriterionConfig) -> Result<TraceabilityVerdict> {
    cfg.validate()?;
    check_lambda(lambda)?;
    let p = mu.profile();
    let br = match limit_branch(p, Criterion::RatioLimitPoint) {
        Ok(br) => br,
        Err(v) => return Ok(v),
    };
    let ln_lambda = lambda.ln();
    let mut distances = Vec::new();
    for pts in windows(p, cfg, ln_lambda) {
        let mut d = f64::INFINITY;
        for &t in &pts {
            d = d.min((ln_s_ratio(p, br, ln_lambda, t)?.exp() - 1.0).abs());
        }
        distances.push(d);
    }
    let verdict = if distances.iter().all(|&d| d < cfg.theta) {
        Traceable::True
    } else if distances.iter().all(|&d| d >= cfg.theta) && distances[2] >= 0.9 * distances[1] {
        Traceable::False
    } else {
        Traceable::Undecided
    };
    let mut ev = vec![evidence("lambda", lambda)];
    ev.extend(distances.iter().enumerate().map(|(i, &d)| evidence(format!("window_{}_min_distance_to_1", i + 1), d)));
    Ok(TraceabilityVerdict::new(verdict, Criterion::RatioLimitPoint, ev, p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub trace_class: TraceClassVerdict,
    pub regular: bool,
    #[serde(with = "crate::serde_ext::option")]
    pub delta: Option<f64>,
    /// Absent when the function's own horizon is too short for the estimator.
    pub matuszewska: Option<MatuszewskaReport>,
    pub indices: TraceabilityVerdict,
    pub liminf: TraceabilityVerdict,
    pub ratio: TraceabilityVerdict,
    /// All decided verdicts coincide.
    pub agreement: bool,
    /// The common decided verdict, undecided when there is none or they disagree.
    pub traceable: Traceable,
    pub finite_rank: bool,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> [&TraceabilityVerdict; 3] {
        [&self.indices, &self.liminf, &self.ratio]
    }
}

/// Runs every check on `μ` and aggregates the verdicts.
pub fn classify(mu: &EigenvalueFunction, cfg: &ClassifyConfig) -> Result<ClassificationReport> {
    let p = mu.profile();
    let (reg, indices) = match regularity_of(p, cfg.regularity_tol, &cfg.estimator) {
        Ok(reg) => {
            let v = indices_verdict(p, &reg.report);
            (Some(reg), v)
        }
        Err(Error::HorizonTooShort { h }) => {
            let v = TraceabilityVerdict::new(Traceable::Undecided, Criterion::Indices, vec![evidence("horizon_too_short_for_h", h)], p);
            (None, v)
        }
        Err(e) => return Err(e),
    };
    let liminf = traceable_by_liminf(mu, &cfg.criteria)?;
    let ratio = traceable_by_ratio(mu, cfg.lambda, &cfg.criteria)?;
    let decided: Vec<Traceable> =
        [&indices, &liminf, &ratio].iter().map(|v| v.traceable).filter(|&t| t != Traceable::Undecided).collect();
    let agreement = decided.windows(2).all(|w| w[0] == w[1]);
    let traceable = match decided.first() {
        Some(&t) if agreement => t,
        _ => Traceable::Undecided,
    };
    Ok(ClassificationReport {
        trace_class: trace_class_of(p),
        regular: reg.as_ref().is_some_and(|r| r.regular),
        delta: reg.as_ref().and_then(|r| r.delta),
        matuszewska: reg.map(|r| r.report),
        indices,
        liminf,
        ratio,
        agreement,
        traceable,
        finite_rank: p.is_finite_rank(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    /// Every singular trace on `I(B)` is infinite on `A`.
    Infinite,
    /// Every singular trace on `I(B)` vanishes on `A`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub verdict: Dichotomy,
    pub a_trace_class: TraceClassVerdict,
    #[serde(with = "crate::serde_ext")]
    pub b_delta: f64,
    /// `A ∈ I(B)` for the infinite case, `A ∈ I_0(B)` for the zero case.
    pub cross_check: IdealDecision,
    /// The ideal decision is the one the verdict implies.
    pub consistent: bool,
}

/// For `A` not singularly traceable and `B` regular with `δ(B) = 1`: singular
/// traces on `I(B)` are infinite on `A` when `A` is not trace class (and then
/// `A ∉ I(B)`), and zero when it is (and then `A ∈ I_0(B)`).
pub fn trace_dichotomy(a: &EigenvalueFunction, b: &EigenvalueFunction, cfg: &ClassifyConfig) -> Result<DichotomyReport> {
    let report = classify(a, cfg)?;
    if report.traceable != Traceable::False {
        return Err(Error::NotApplicable(format!("A must not be singularly traceable (verdict {:?})", report.traceable)));
    }
    let reg = regularity_of(b.profile(), cfg.regularity_tol, &cfg.estimator)?;
    let b_delta = match reg.delta {
        Some(d) if reg.regular && (d - 1.0).abs() <= if reg.report.is_exact() { 0.0 } else { cfg.regularity_tol } => d,
        _ => {
            return Err(Error::NotApplicable(format!(
                "B must be regular with δ = 1 (indices {} and {})",
                reg.report.delta_lower, reg.report.delta_upper
            )))
        }
    };
    let (pa, pb) = (a.profile(), b.profile());
    let (verdict, cross_check, expected) = match report.trace_class.verdict {
        TraceClass::NotTraceClass => (Dichotomy::Infinite, principal_of(pa, pb, &cfg.ideals)?, Membership::NonMember),
        TraceClass::TraceClass => (Dichotomy::Zero, kernel_of(pa, pb, &cfg.ideals)?, Membership::Member),
        TraceClass::Undecided => return Err(Error::UndecidedBranch),
    };
    let consistent = cross_check.verdict == expected;
    Ok(DichotomyReport { verdict, a_trace_class: report.trace_class, b_delta, cross_check, consistent })
}
