//! Matuszewska indices of an eigenvalue function,
//!
//! ```text
//! 1/δ̲ = inf_{h>0} limsup_{t→∞} (g(t+h) - g(t)) / h
//! 1/δ̄ = sup_{h>0} liminf_{t→∞} (g(t+h) - g(t)) / h
//! ```
//!
//! computed exactly from the asymptotic expansion when one is available and
//! estimated on a tail window otherwise. The estimate replaces `inf_h`/`sup_h`
//! by a minimum/maximum over a finite h-grid and `t → ∞` by the window
//! `[ωT, T-h]`, so δ̲ is biased upwards and δ̄ downwards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{EigenvalueFunction, Profile};
use crate::grid;

/// Width of the band around 1 inside which estimated indices are not trusted
/// to decide comparisons with 1.
pub const INDEX_BAND: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub h_grid: Vec<f64>,
    /// Horizon `T` in t-coordinates. Functions known only up to an intrinsic
    /// horizon (staircases, sampled data) use that instead.
    pub horizon: f64,
    /// ω: the tail window starts at `ωT`.
    pub tail_window: f64,
    pub t_step: f64,
    /// Estimate even when the exact expansion is known.
    pub force_estimate: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { h_grid: vec![1.0, 2.0, 4.0, 8.0, 16.0], horizon: 40.0, tail_window: 0.5, t_step: 0.01, force_estimate: false }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.h_grid.is_empty() {
            return bad("h-grid is empty".into());
        }
        if self.h_grid.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return bad(format!("h-grid entries must be positive, got {:?}", self.h_grid));
        }
        if self.h_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("h-grid must be increasing, got {:?}", self.h_grid));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if !(self.tail_window > 0.0 && self.tail_window < 1.0) {
            return bad(format!("tail window fraction must lie in (0, 1), got {}", self.tail_window));
        }
        if !(self.t_step.is_finite() && self.t_step > 0.0) {
            return bad(format!("t-step must be positive, got {}", self.t_step));
        }
        Ok(())
    }

    /// Horizon actually used for `p`.
    pub fn effective_horizon(&self, p: &Profile) -> f64 {
        p.horizon().unwrap_or(self.horizon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMode {
    Exact,
    Estimated,
}

/// Tail-window extremes of the increment quotient for one `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientRow {
    pub h: f64,
    #[serde(with = "crate::serde_ext")]
    pub sup: f64,
    #[serde(with = "crate::serde_ext")]
    pub inf: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatuszewskaReport {
    #[serde(with = "crate::serde_ext")]
    pub delta_lower: f64,
    #[serde(with = "crate::serde_ext")]
    pub delta_upper: f64,
    pub mode: IndexMode,
    pub per_h_table: Vec<QuotientRow>,
    pub config: EstimatorConfig,
    /// Horizon the estimate was computed on (`None` in exact mode).
    #[serde(with = "crate::serde_ext::option")]
    pub horizon_used: Option<f64>,
    /// The function is only known up to a finite horizon.
    pub horizon_limited: bool,
    /// Finite rank: indices are set to 0 by convention.
    pub finite_rank: bool,
}

impl MatuszewskaReport {
    pub fn is_exact(&self) -> bool {
        self.mode == IndexMode::Exact
    }
}

fn reciprocal(rate: f64) -> f64 {
    if rate <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / rate
    }
}

/// Matuszewska indices of `μ`.
pub fn matuszewska(mu: &EigenvalueFunction, cfg: &EstimatorConfig) -> Result<MatuszewskaReport> {
    indices_of(mu.profile(), cfg)
}

pub(crate) fn indices_of(p: &Profile, cfg: &EstimatorConfig) -> Result<MatuszewskaReport> {
    cfg.validate()?;
    let report = |lower, upper, mode, table, horizon_used| MatuszewskaReport {
        delta_lower: lower,
        delta_upper: upper,
        mode,
        per_h_table: table,
        config: cfg.clone(),
        horizon_used,
        horizon_limited: p.horizon().is_some(),
        finite_rank: p.is_finite_rank(),
    };
    if p.is_finite_rank() {
        return Ok(report(0.0, 0.0, IndexMode::Exact, vec![], None));
    }
    if !cfg.force_estimate {
        if let Some(e) = p.expansion() {
            let d = reciprocal(e.rate());
            return Ok(report(d, d, IndexMode::Exact, vec![], None));
        }
    }
    let horizon = cfg.effective_horizon(p);
    let table = quotient_table(p, cfg, horizon)?;
    let upper_rate = table.iter().map(|r| r.sup).fold(f64::INFINITY, f64::min);
    let lower_rate = table.iter().map(|r| r.inf).fold(0.0, f64::max).min(upper_rate);
    Ok(report(reciprocal(upper_rate), reciprocal(lower_rate), IndexMode::Estimated, table, Some(horizon)))
}

fn quotient_table(p: &Profile, cfg: &EstimatorConfig, horizon: f64) -> Result<Vec<QuotientRow>> {
    let h_max = cfg.h_grid[cfg.h_grid.len() - 1];
    if h_max >= (1.0 - cfg.tail_window) * horizon {
        if horizon < cfg.horizon {
            // the function's own horizon is the limit, not the configuration
            return Err(Error::HorizonTooShort { h: h_max });
        }
        return Err(Error::InvalidConfig(format!(
            "largest h = {h_max} must be below (1 - ω)·T = {}",
            (1.0 - cfg.tail_window) * horizon
        )));
    }
    let breakpoints = p.g_breakpoints();
    cfg.h_grid
        .iter()
        .map(|&h| {
            let (w0, w1) = (cfg.tail_window * horizon, horizon - h);
            if (w1 - w0) / cfg.t_step < 10.0 {
                return Err(Error::HorizonTooShort { h });
            }
            let points = match &breakpoints {
                // the quotient of a step function only changes at b and b - h
                Some(bps) => grid::merged(vec![w0], bps.iter().flat_map(|&b| [b, b - h]), w0, w1),
                None => grid::stepped(w0, w1, cfg.t_step),
            };
            let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
            for &t in &points {
                let mut q = (p.g(t + h) - p.g(t)) / h;
                if q.is_nan() {
                    q = f64::INFINITY;
                }
                sup = sup.max(q);
                inf = inf.min(q);
            }
            Ok(QuotientRow { h, sup, inf, points: points.len() })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    /// Common index when regular.
    #[serde(with = "crate::serde_ext::option")]
    pub delta: Option<f64>,
    pub report: MatuszewskaReport,
}

/// Regularity `δ̲ = δ̄`: exact equality in exact mode, `δ̄ - δ̲ ≤ tol` otherwise.
/// Finite-rank functions are never reported regular.
pub fn is_regular(mu: &EigenvalueFunction, tol: f64, cfg: &EstimatorConfig) -> Result<Regularity> {
    regularity_of(mu.profile(), tol, cfg)
}

pub(crate) fn regularity_of(p: &Profile, tol: f64, cfg: &EstimatorConfig) -> Result<Regularity> {
    let report = indices_of(p, cfg)?;
    let (lo, hi) = (report.delta_lower, report.delta_upper);
    let regular = !report.finite_rank
        && match report.mode {
            IndexMode::Exact => lo == hi,
            IndexMode::Estimated => lo == hi || hi - lo <= tol,
        };
    let delta = regular.then(|| if lo.is_infinite() { lo } else { 0.5 * (lo + hi) });
    Ok(Regularity { regular, delta, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// δ̲ > 1: `g(t) < c + (1-ε)t`.
    SubLinear,
    /// δ̄ < 1: `g(t) > -c + (1+ε)t`.
    SuperLinear,
    /// δ = 1: `-c₁ + (1-ε)t ≤ g(t) ≤ c₂ + (1+ε)t`.
    Linear,
}

/// Linear bounds on `g`, valid for `t ≥ t0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearBoundWitness {
    pub case: BoundCase,
    pub epsilon: f64,
    /// `c₁` in `g(t) ≥ -c₁ + (1-ε)t`, or `c` in `g(t) > -c + (1+ε)t`.
    #[serde(with = "crate::serde_ext::option")]
    pub c_lower: Option<f64>,
    /// `c₂` in `g(t) ≤ c₂ + (1+ε)t`, or `c` in `g(t) < c + (1-ε)t`.
    #[serde(with = "crate::serde_ext::option")]
    pub c_upper: Option<f64>,
    pub t0: f64,
    pub t_end: f64,
    pub grid_points: usize,
}

impl LinearBoundWitness {
    /// Slope of the lower bound line, if any.
    pub fn lower_slope(&self) -> f64 {
        match self.case {
            BoundCase::SuperLinear => 1.0 + self.epsilon,
            _ => 1.0 - self.epsilon,
        }
    }

    /// Slope of the upper bound line, if any.
    pub fn upper_slope(&self) -> f64 {
        match self.case {
            BoundCase::SubLinear => 1.0 - self.epsilon,
            _ => 1.0 + self.epsilon,
        }
    }

    /// Whether the bounds hold for the value `g` at `t`.
    pub fn holds(&self, t: f64, g: f64) -> bool {
        let strict = self.case != BoundCase::Linear;
        let lower_ok = self.c_lower.is_none_or(|c| {
            let line = -c + self.lower_slope() * t;
            if strict { g > line } else { g >= line }
        });
        let upper_ok = self.c_upper.is_none_or(|c| {
            let line = c + self.upper_slope() * t;
            if strict { g < line } else { g <= line }
        });
        lower_ok && upper_ok
    }
}

/// Finds the linear bounds of the case that the indices of `μ` allow.
///
/// The constants are upper bounds over the whole interval `[0, T]`, not just
/// over grid points: `g` is non-decreasing, so on `[t_k, t_{k+1}]` the quantity
/// `g(t) - (1-ε)t` is below `g(t_{k+1}) - (1-ε)t_k`, and similarly for the
/// other bounds.
pub fn linear_bound_witness(mu: &EigenvalueFunction, epsilon: f64, cfg: &EstimatorConfig) -> Result<LinearBoundWitness> {
    let p = mu.profile();
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {epsilon}")));
    }
    let reg = regularity_of(p, INDEX_BAND, cfg)?;
    let (lo, hi) = (reg.report.delta_lower, reg.report.delta_upper);
    let exact = reg.report.is_exact();
    let near_one = |d: f64| if exact { d == 1.0 } else { (d - 1.0).abs() <= INDEX_BAND };
    let case = if reg.regular && reg.delta.is_some_and(near_one) {
        if epsilon >= 1.0 {
            return Err(Error::PreconditionFailed(format!("ε = {epsilon} must be below 1")));
        }
        BoundCase::Linear
    } else if lo > 1.0 {
        if epsilon >= 1.0 - 1.0 / lo {
            return Err(Error::PreconditionFailed(format!("ε = {epsilon} must be below 1 - 1/δ̲ = {}", 1.0 - 1.0 / lo)));
        }
        BoundCase::SubLinear
    } else if hi < 1.0 {
        if epsilon >= 1.0 / hi - 1.0 {
            return Err(Error::PreconditionFailed(format!("ε = {epsilon} must be below 1/δ̄ - 1 = {}", 1.0 / hi - 1.0)));
        }
        BoundCase::SuperLinear
    } else {
        return Err(Error::PreconditionFailed(format!(
            "no case applies: δ̲ = {lo}, δ̄ = {hi} (need δ̲ > 1, δ̄ < 1 or δ = 1)"
        )));
    };

    let t_end = cfg.effective_horizon(p);
    let ts = grid::stepped(0.0, t_end, cfg.t_step);
    let gs: Vec<f64> = ts.iter().map(|&t| p.g(t)).collect();
    if gs.iter().any(|g| !g.is_finite()) {
        return Err(Error::NoWitnessOnHorizon("g is not finite on the grid".into()));
    }
    let n = ts.len();
    // maximum over k of f(k), the interval index where it is attained
    let sup = |f: &dyn Fn(usize) -> f64| {
        (0..n - 1).map(|k| (k, f(k))).fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    };
    let check_tail = |(k, _): (usize, f64), what: &str| {
        if k as f64 >= 0.9 * (n - 1) as f64 {
            Err(Error::NoWitnessOnHorizon(format!("{what} is still growing at t = {:.6}", ts[k])))
        } else {
            Ok(())
        }
    };
    // strict inequalities get a margin of a few ulps of the bound
    let pad = |c: f64| c + 1e-12 * (1.0 + c.abs());
    let upper = |slope: f64| sup(&|k| gs[k + 1] - slope * ts[k]);
    let lower = |slope: f64| sup(&|k| slope * ts[k + 1] - gs[k]);
    let (c_lower, c_upper) = match case {
        BoundCase::SubLinear => {
            let u = upper(1.0 - epsilon);
            check_tail(u, "g(t) - (1-ε)t")?;
            (None, Some(pad(u.1)))
        }
        BoundCase::SuperLinear => {
            let l = lower(1.0 + epsilon);
            check_tail(l, "(1+ε)t - g(t)")?;
            (Some(pad(l.1)), None)
        }
        BoundCase::Linear => {
            let l = lower(1.0 - epsilon);
            let u = upper(1.0 + epsilon);
            check_tail(l, "(1-ε)t - g(t)")?;
            check_tail(u, "g(t) - (1+ε)t")?;
            (Some(l.1), Some(u.1))
        }
    };
    Ok(LinearBoundWitness { case, epsilon, c_lower, c_upper, t0: 0.0, t_end, grid_points: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{dilate, LogStep, LogStepTail};

    fn estimated() -> EstimatorConfig {
        EstimatorConfig { force_estimate: true, ..Default::default() }
    }

    #[test]
    fn exact_indices_of_closed_forms() {
        let cfg = EstimatorConfig::default();
        let r = matuszewska(&EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap(), &cfg).unwrap();
        assert_eq!((r.delta_lower, r.delta_upper, r.mode), (0.5, 0.5, IndexMode::Exact));
        let r = matuszewska(&EigenvalueFunction::exponential(1.0).unwrap(), &cfg).unwrap();
        assert_eq!((r.delta_lower, r.delta_upper), (0.0, 0.0));
        let r = matuszewska(&EigenvalueFunction::power_log(1.0, 0.0, 2.0).unwrap(), &cfg).unwrap();
        assert_eq!((r.delta_lower, r.delta_upper), (f64::INFINITY, f64::INFINITY));
    }

    #[test]
    fn estimated_power_indices() {
        for p in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let r = matuszewska(&EigenvalueFunction::reciprocal_power(1.0, p).unwrap(), &estimated()).unwrap();
            assert_eq!(r.mode, IndexMode::Estimated);
            assert!((r.delta_lower - 1.0 / p).abs() < 0.02, "p={p}: {r:?}");
            assert!((r.delta_upper - 1.0 / p).abs() < 0.02, "p={p}: {r:?}");
            assert_eq!(r.per_h_table.len(), 5);
        }
    }

    #[test]
    fn estimated_exponential_is_near_zero() {
        let r = matuszewska(&EigenvalueFunction::exponential(1.0).unwrap(), &estimated()).unwrap();
        assert!(r.delta_upper < 1e-6);
        assert!(r.delta_lower <= r.delta_upper);
    }

    #[test]
    fn dilation_leaves_indices_unchanged() {
        let mu = EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap();
        let base = matuszewska(&mu, &estimated()).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let d = dilate(&mu, lambda).unwrap();
            let exact = matuszewska(&d, &EstimatorConfig::default()).unwrap();
            assert_eq!(exact.delta_lower, 0.5);
            let r = matuszewska(&d, &estimated()).unwrap();
            assert!((r.delta_lower - base.delta_lower).abs() < 1e-2);
            assert!((r.delta_upper - base.delta_upper).abs() < 1e-2);
        }
    }

    #[test]
    fn step_quotients_use_breakpoints() {
        // g jumps by 10 at t = 25 and t = 35, flat otherwise
        let s = LogStep::new(vec![0.0, 25.0, 35.0, 40.0], vec![0.0, 10.0, 20.0], LogStepTail::Horizon).unwrap();
        let mu = EigenvalueFunction::new(Profile::LogStep(s)).unwrap();
        let cfg = EstimatorConfig { h_grid: vec![1.0, 2.0], ..Default::default() };
        let r = matuszewska(&mu, &cfg).unwrap();
        assert_eq!(r.horizon_used, Some(40.0));
        assert!(r.horizon_limited);
        assert_eq!(r.per_h_table[0].sup, 10.0);
        assert_eq!(r.per_h_table[1].sup, 5.0);
        assert_eq!(r.per_h_table[1].inf, 0.0);
        assert_eq!(r.delta_lower, 0.2);
        assert_eq!(r.delta_upper, f64::INFINITY);
    }

    #[test]
    fn config_checks() {
        let mu = EigenvalueFunction::power(1.0).unwrap();
        let cfg = EstimatorConfig { h_grid: vec![1.0, 64.0], ..estimated() };
        assert!(matches!(matuszewska(&mu, &cfg), Err(Error::InvalidConfig(_))));
        let cfg = EstimatorConfig { h_grid: vec![2.0, 1.0], ..estimated() };
        assert!(matches!(matuszewska(&mu, &cfg), Err(Error::InvalidConfig(_))));
        let cfg = EstimatorConfig { h_grid: vec![1.0], t_step: 1.0, horizon: 20.0, ..estimated() };
        assert_eq!(matuszewska(&mu, &cfg), Err(Error::HorizonTooShort { h: 1.0 }));
    }

    #[test]
    fn regularity() {
        let cfg = EstimatorConfig::default();
        let r = is_regular(&EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap(), 1e-2, &cfg).unwrap();
        assert!(r.regular);
        assert_eq!(r.delta, Some(1.0));
        let r = is_regular(&EigenvalueFunction::reciprocal_power(1.0, 3.0).unwrap(), 1e-2, &cfg).unwrap();
        assert_eq!(r.delta, Some(1.0 / 3.0));
    }

    #[test]
    fn witnesses_for_each_case() {
        let cfg = EstimatorConfig::default();
        let w = linear_bound_witness(&EigenvalueFunction::reciprocal_power(1.0, 0.5).unwrap(), 0.25, &cfg).unwrap();
        assert_eq!(w.case, BoundCase::SubLinear);
        let w = linear_bound_witness(&EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap(), 0.5, &cfg).unwrap();
        assert_eq!(w.case, BoundCase::SuperLinear);
        let mu = EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap();
        let w = linear_bound_witness(&mu, 0.1, &cfg).unwrap();
        assert_eq!(w.case, BoundCase::Linear);
        for i in 0..=8000 {
            let t = i as f64 * 0.005;
            assert!(w.holds(t, mu.profile().g(t)), "t={t}");
        }
    }

    #[test]
    fn witness_preconditions() {
        let cfg = EstimatorConfig::default();
        let mu = EigenvalueFunction::reciprocal_power(1.0, 0.5).unwrap();
        assert!(matches!(linear_bound_witness(&mu, 0.6, &cfg), Err(Error::PreconditionFailed(_))));
        // g(t) - 0.51t ≈ 5 ln t - 0.01t peaks near t = 500, far past the horizon
        let mu = EigenvalueFunction::power_log(1.0, 0.5, 5.0).unwrap();
        assert!(matches!(linear_bound_witness(&mu, 0.49, &cfg), Err(Error::NoWitnessOnHorizon(_))));
    }
}
