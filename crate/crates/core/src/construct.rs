//! Staircase constructions of singularly traceable operators relative to a
//! given compact `A`.
//!
//! Both build an increasing sequence `t_1 < t_2 < …` with `t_{n+1} - t_n > n`
//! and a step function `g` constant on each `[t_n, t_{n+1})`:
//!
//! - the *vanisher* takes `g = g_A(t_n)^{1/2}` with root gaps
//!   `g_A(t_{n+1})^{1/2} - g_A(t_n)^{1/2} > n`, so `A` falls in the kernel of `I(B)`;
//! - the *dominator* takes `g = g_A(t_{n+1})^2` with squared gaps
//!   `g_A(t_{n+1})^2 - g_A(t_n)^2 > n`, so `A` lies outside `I(B)`.
//!
//! The long flat stretches and tall jumps force `δ̲ = 0` and `δ̄ = ∞`.
//!
//! Breakpoints are chosen greedily with margin `n + 1`:
//! `t_{n+1} = max(t_n + (n+1), inf{t : gap(t) > n + 1})`. The infimum is found by
//! doubling and bisection to a relative `1e-9`, taking the right end of the
//! final bracket so that the strict inequality holds at the chosen point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{EigenvalueFunction, GFunction, LogStep, LogStepTail, Profile};
use crate::grid;
use crate::ideals::KernelLevel;
use crate::indices::{indices_of, EstimatorConfig};

/// First breakpoint `t_1`.
pub const DEFAULT_START: f64 = 1.0;
pub const DEFAULT_STEPS: usize = 40;

const BISECTION_TOL: f64 = 1e-9;
const MAX_DOUBLINGS: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Vanisher,
    Dominator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseConstruction {
    pub variant: Variant,
    /// `t_1 < … < t_N`.
    pub breakpoints: Vec<f64>,
    /// g-value on `[t_n, t_{n+1})`, one fewer than the breakpoints.
    pub step_values: Vec<f64>,
    pub source: GFunction,
    /// Vertical offset added to `g_A` so that it is at least 1 from `t_1` on.
    pub offset: f64,
}

impl StaircaseConstruction {
    /// The staircase as a g-function, known up to its last breakpoint.
    pub fn g_function(&self) -> Result<GFunction> {
        let s = LogStep::new(self.breakpoints.clone(), self.step_values.clone(), LogStepTail::Horizon)?;
        GFunction::new(Profile::LogStep(s))
    }

    pub fn eigenvalue_function(&self) -> Result<EigenvalueFunction> {
        EigenvalueFunction::new(self.g_function()?.into_profile())
    }

    /// Normalized source `g_A + offset`.
    fn source_at(&self, t: f64) -> f64 {
        self.source.eval(t) + self.offset
    }
}

/// The transformed source values compared by the gap condition.
fn transform(variant: Variant, g: f64) -> f64 {
    match variant {
        Variant::Vanisher => g.sqrt(),
        Variant::Dominator => g * g,
    }
}

/// Staircase `B` with `A` in the kernel of `I(B)`, starting at `t_1 = 1`.
pub fn construct_vanisher(g_a: &GFunction, n_steps: usize) -> Result<StaircaseConstruction> {
    construct(g_a, Variant::Vanisher, n_steps, DEFAULT_START)
}

/// Staircase `B` with `A` outside `I(B)`, starting at `t_1 = 1`.
pub fn construct_dominator(g_a: &GFunction, n_steps: usize) -> Result<StaircaseConstruction> {
    construct(g_a, Variant::Dominator, n_steps, DEFAULT_START)
}

/// Runs the greedy construction with `n_steps` breakpoints from `start`.
pub fn construct(g_a: &GFunction, variant: Variant, n_steps: usize, start: f64) -> Result<StaircaseConstruction> {
    if n_steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 steps, got {n_steps}")));
    }
    if !start.is_finite() {
        return Err(Error::InvalidArgument(format!("start point must be finite, got {start}")));
    }
    let p = g_a.profile();
    if p.is_finite_rank() {
        return Err(Error::FiniteRank);
    }
    let g0 = p.g(start);
    if !g0.is_finite() {
        return Err(Error::FiniteRank);
    }
    let offset = (1.0 - g0).max(0.0);
    let src = |t: f64| p.g(t) + offset;
    let jumps = p.g_breakpoints();
    let horizon = p.horizon();

    let mut ts = vec![start];
    for n in 1..n_steps {
        let t_n = ts[n - 1];
        let base = transform(variant, src(t_n));
        if !base.is_finite() {
            return Err(Error::BreakpointOverflow { step: n });
        }
        let margin = (n + 1) as f64;
        let pred = |t: f64| transform(variant, src(t)) - base > margin;
        let hit = first_crossing(&pred, t_n, horizon, jumps.as_deref(), n)?;
        let next = (t_n + margin).max(hit);
        if let Some(h) = horizon {
            if next > h {
                return Err(Error::HorizonExceeded { step: n, horizon: h });
            }
        }
        ts.push(next);
    }
    let values: Vec<f64> = match variant {
        Variant::Vanisher => ts[..n_steps - 1].iter().map(|&t| src(t).sqrt()).collect(),
        Variant::Dominator => ts[1..].iter().map(|&t| src(t).powi(2)).collect(),
    };
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::BreakpointOverflow { step: i + 1 });
    }
    Ok(StaircaseConstruction { variant, breakpoints: ts, step_values: values, source: g_a.clone(), offset })
}

/// `inf{t > t_n : pred(t)}` up to the bisection tolerance, returned as a point
/// where `pred` holds.
fn first_crossing(
    pred: &dyn Fn(f64) -> bool,
    t_n: f64,
    horizon: Option<f64>,
    jumps: Option<&[f64]>,
    step: usize,
) -> Result<f64> {
    let mut lo = t_n;
    let mut width = 1.0;
    let mut hi = t_n + width;
    let mut doublings = 0;
    loop {
        if let Some(h) = horizon {
            if hi >= h {
                if !pred(h) {
                    return Err(Error::HorizonExceeded { step, horizon: h });
                }
                hi = h;
                break;
            }
        }
        if pred(hi) {
            break;
        }
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(if pred_never_moves(pred, t_n) { Error::Bounded } else { Error::BreakpointOverflow { step } });
        }
        lo = hi;
        width *= 2.0;
        hi = t_n + width;
    }
    while hi - lo > BISECTION_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // a step source crosses exactly at one of its jumps
    if let Some(bps) = jumps {
        if let Some(&b) = bps.iter().find(|&&b| b > lo && b <= hi && pred(b)) {
            hi = b;
        }
    }
    Ok(hi)
}

fn pred_never_moves(pred: &dyn Fn(f64) -> bool, t_n: f64) -> bool {
    !pred(f64::MAX) && !pred(t_n + 2f64.powi(MAX_DOUBLINGS as i32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Index estimation on the staircase. Its horizon is the last breakpoint.
    pub estimator: EstimatorConfig,
    pub lower_target: f64,
    pub upper_target: f64,
    pub levels: Vec<f64>,
    pub grid_points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            estimator: EstimatorConfig { h_grid: vec![0.125, 0.25, 0.5, 1.0, 2.0], ..Default::default() },
            lower_target: 0.1,
            upper_target: 10.0,
            levels: vec![1.0, 10.0, 100.0],
            grid_points: 4000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub variant: Variant,
    pub checks: Vec<Check>,
    #[serde(with = "crate::serde_ext")]
    pub delta_lower: f64,
    #[serde(with = "crate::serde_ext")]
    pub delta_upper: f64,
    /// `t0(c)` for the kernel (vanisher) or exclusion (dominator) condition.
    pub levels: Vec<KernelLevel>,
}

/// Re-checks a construction independently of how it was produced: gap
/// conditions, step values, the pointwise bound against `g_A`, the index
/// estimates and the target ideal relation. Fails on the first violated check.
pub fn verify_construction(s: &StaircaseConstruction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let fail = |name: &str, detail: String| Err(Error::VerificationFailed(format!("{name}: {detail}")));
    let mut checks = Vec::new();
    let mut pass = |name: &str, detail: String| checks.push(Check { name: name.into(), passed: true, detail });
    let ts = &s.breakpoints;
    let n_steps = ts.len();
    if n_steps < 2 || s.step_values.len() != n_steps - 1 {
        return fail("shape", format!("{} breakpoints and {} values", n_steps, s.step_values.len()));
    }

    for n in 1..n_steps {
        let (a, b) = (ts[n - 1], ts[n]);
        if !(b - a > n as f64) {
            return fail("spacing", format!("t_{} - t_{} = {} is not above {n}", n + 1, n, b - a));
        }
        let gap = transform(s.variant, s.source_at(b)) - transform(s.variant, s.source_at(a));
        if !(gap > n as f64) {
            return fail("value gap", format!("gap {gap} between t_{n} and t_{} is not above {n}", n + 1));
        }
    }
    pass("spacing", format!("t_(n+1) - t_n > n for n = 1..{}", n_steps - 1));
    pass("value gap", format!("transformed source gaps exceed n for n = 1..{}", n_steps - 1));

    for n in 0..n_steps - 1 {
        let expected = match s.variant {
            Variant::Vanisher => s.source_at(ts[n]).sqrt(),
            Variant::Dominator => s.source_at(ts[n + 1]).powi(2),
        };
        if s.step_values[n] != expected {
            return fail("step values", format!("value {} on step {} differs from {expected}", s.step_values[n], n + 1));
        }
    }
    pass("step values", "every step carries the value the rule prescribes".into());

    let g = s.g_function().map_err(|e| Error::VerificationFailed(format!("staircase is not in G: {e}")))?;
    let (t_first, t_last) = (ts[0], ts[n_steps - 1]);
    let lefts = ts.iter().map(|&t| t - 1e-12 * t.abs().max(1.0));
    let pts = grid::merged(grid::uniform(t_first, t_last, cfg.grid_points), ts.iter().copied().chain(lefts), t_first, t_last);
    // the last breakpoint is the horizon; the step before it is the last one known
    let pts: Vec<f64> = pts.into_iter().filter(|&t| t < t_last).collect();
    for &t in &pts {
        let (gb, ga) = (g.eval(t), transform(s.variant, s.source_at(t)));
        let ok = match s.variant {
            Variant::Vanisher => gb <= ga,
            Variant::Dominator => gb >= ga,
        };
        if !ok {
            let rel = if s.variant == Variant::Vanisher { "≤ g_A^(1/2)" } else { "≥ g_A^2" };
            return fail("pointwise bound", format!("g({t}) = {gb} violates g {rel} = {ga}"));
        }
    }
    pass("pointwise bound", format!("checked at {} points on [t_1, t_N)", pts.len()));

    let report = indices_of(g.profile(), &cfg.estimator)?;
    if !(report.delta_lower <= cfg.lower_target) {
        return fail("indices", format!("δ̲ estimate {} exceeds {}", report.delta_lower, cfg.lower_target));
    }
    if !(report.delta_upper >= cfg.upper_target) {
        return fail("indices", format!("δ̄ estimate {} is below {}", report.delta_upper, cfg.upper_target));
    }
    pass("indices", format!("δ̲ ≈ {}, δ̄ ≈ {}", report.delta_lower, report.delta_upper));

    // vanisher: g_A - g > c eventually; dominator: g - g_A > c eventually
    let gaps: Vec<(f64, f64)> = pts
        .iter()
        .map(|&t| {
            let (ga, gb) = (s.source.eval(t), g.eval(t));
            (t, if s.variant == Variant::Vanisher { ga - gb } else { gb - ga })
        })
        .collect();
    let cutoff = t_first + 0.9 * (t_last - t_first);
    let mut levels = Vec::new();
    for &c in &cfg.levels {
        let t0 = match gaps.iter().rposition(|p| p.1 <= c) {
            None => gaps[0].0,
            Some(i) if i + 1 < gaps.len() => gaps[i + 1].0,
            Some(_) => f64::INFINITY,
        };
        if t0 > cutoff {
            let what = if s.variant == Variant::Vanisher { "g_A - g" } else { "g - g_A" };
            return fail("target relation", format!("{what} does not stay above {c} before t = {cutoff}"));
        }
        levels.push(KernelLevel { c, t0 });
    }
    let name = match s.variant {
        Variant::Vanisher => "kernel condition",
        Variant::Dominator => "exclusion condition",
    };
    pass(name, format!("thresholds {:?}", levels.iter().map(|l| (l.c, l.t0)).collect::<Vec<_>>()));

    Ok(VerificationReport {
        variant: s.variant,
        checks,
        delta_lower: report.delta_lower,
        delta_upper: report.delta_upper,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{g_transform, Step};

    fn linear() -> GFunction {
        GFunction::linear(1.0, 0.0).unwrap()
    }

    #[test]
    fn vanisher_of_identity() {
        let s = construct_vanisher(&linear(), 3).unwrap();
        let t = &s.breakpoints;
        assert_eq!(t[0], 1.0);
        assert!((t[1] - 9.0).abs() < 1e-7 && t[1] > 9.0);
        assert!((t[2] - 36.0).abs() < 1e-6 && t[2] > 36.0);
        assert_eq!(s.step_values[0], 1.0);
        assert!((s.step_values[1] - 3.0).abs() < 1e-8);
        assert_eq!(s.offset, 0.0);
    }

    #[test]
    fn dominator_of_identity() {
        let s = construct_dominator(&linear(), 4).unwrap();
        // spacing dominates: t_n are the triangular numbers
        assert_eq!(s.breakpoints, vec![1.0, 3.0, 6.0, 10.0]);
        assert_eq!(s.step_values, vec![9.0, 36.0, 100.0]);
    }

    #[test]
    fn full_constructions_verify() {
        let cfg = VerifyConfig::default();
        for variant in [Variant::Vanisher, Variant::Dominator] {
            let s = construct(&linear(), variant, DEFAULT_STEPS, DEFAULT_START).unwrap();
            for n in 1..DEFAULT_STEPS {
                assert!(s.breakpoints[n] - s.breakpoints[n - 1] > n as f64);
            }
            let r = verify_construction(&s, &cfg).unwrap();
            assert!(r.checks.iter().all(|c| c.passed));
            assert!(r.delta_lower <= 0.1 && r.delta_upper >= 10.0, "{variant:?}: {r:?}");
        }
    }

    #[test]
    fn corrupted_staircase_is_rejected() {
        let mut s = construct_vanisher(&linear(), 10).unwrap();
        s.breakpoints[5] = s.breakpoints[4] + 1.0;
        assert!(matches!(verify_construction(&s, &VerifyConfig::default()), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn normalization_offset() {
        // g = -3 + t is below 1 at t_1 = 1
        let s = construct_vanisher(&GFunction::linear(1.0, -3.0).unwrap(), 5).unwrap();
        assert_eq!(s.offset, 3.0);
        assert_eq!(s.step_values[0], 1.0);
    }

    #[test]
    fn rejects_finite_rank_and_short_sources() {
        let f = g_transform(&EigenvalueFunction::new(Profile::Step(Step::new(vec![0.0, 1.0], vec![1.0]).unwrap())).unwrap());
        assert_eq!(construct_vanisher(&f, 10), Err(Error::FiniteRank));
        assert_eq!(construct_dominator(&f, 10), Err(Error::FiniteRank));
        let short = LogStep::new(vec![0.0, 5.0, 10.0], vec![0.0, 1.0], LogStepTail::Horizon).unwrap();
        let short = GFunction::new(Profile::LogStep(short)).unwrap();
        assert!(matches!(construct_vanisher(&short, 10), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn step_sources_land_on_jumps() {
        let bps: Vec<f64> = (0..=2000).map(f64::from).collect();
        let vals: Vec<f64> = (0..2000).map(|k| f64::from(k) + 1.0).collect();
        let src = GFunction::new(Profile::LogStep(LogStep::new(bps, vals, LogStepTail::Horizon).unwrap())).unwrap();
        let s = construct_vanisher(&src, 6).unwrap();
        assert!(s.breakpoints.iter().all(|t| t.fract() == 0.0), "{:?}", s.breakpoints);
    }

    #[test]
    fn exponential_dominator_overflows() {
        let g = g_transform(&EigenvalueFunction::exponential(1.0).unwrap());
        let r = construct_dominator(&g, 40);
        assert!(matches!(r, Err(Error::BreakpointOverflow { .. })), "{:?}", r.map(|s| s.breakpoints));
        // t_30 = 465 keeps e^t finite
        assert!(construct_vanisher(&g, 30).is_ok());
    }
}
