//! The integral eigenvalue function
//!
//! ```text
//! S(x) = S↑(x) = ∫_0^x μ     if μ ∉ L¹[0,∞)
//! S(x) = S↓(x) = ∫_x^∞ μ     if μ ∈ L¹[0,∞)
//! ```
//!
//! and the two ratios the traceability criteria are built from. All internal
//! work is done on `ln S(e^t)` so that evaluation far out (x = e^4000, or
//! staircases with breakpoints beyond e^700000) stays finite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{EigenvalueFunction, PowerLog, Profile, Sampled};
use crate::quad::{integrate, ln_add, ln_diff_exp, ln_integrate, ln_integrate_to_infinity};

const QUAD_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `S↑(x) = ∫_0^x μ`, for functions outside L¹.
    Up,
    /// `S↓(x) = ∫_x^∞ μ`, for trace-class functions.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceClass {
    TraceClass,
    NotTraceClass,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictBasis {
    Exact,
    TailModel,
    HorizonOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceClassVerdict {
    pub verdict: TraceClass,
    pub basis: VerdictBasis,
}

impl TraceClassVerdict {
    fn exact(trace_class: bool) -> Self {
        Self { verdict: if trace_class { TraceClass::TraceClass } else { TraceClass::NotTraceClass }, basis: VerdictBasis::Exact }
    }

    pub fn branch(&self) -> Result<Branch> {
        match self.verdict {
            TraceClass::TraceClass => Ok(Branch::Down),
            TraceClass::NotTraceClass => Ok(Branch::Up),
            TraceClass::Undecided => Err(Error::UndecidedBranch),
        }
    }
}

/// Decides whether `μ ∈ L¹[0, ∞)`.
///
/// Closed-form families and finite-rank functions are decided exactly; sampled
/// data defers to its tail model. Horizon-limited staircases are judged from the
/// masses of their last steps: steadily growing masses mean divergence, masses
/// shrinking at least geometrically (ratio ≤ 1/2) mean convergence.
pub fn is_trace_class(mu: &EigenvalueFunction) -> TraceClassVerdict {
    trace_class_of(mu.profile())
}

pub(crate) fn trace_class_of(p: &Profile) -> TraceClassVerdict {
    if p.is_finite_rank() {
        return TraceClassVerdict::exact(true);
    }
    match p {
        Profile::Sampled(s) => match s.tail() {
            Some(tail) => {
                let v = trace_class_of(tail);
                TraceClassVerdict { verdict: v.verdict, basis: v.basis.max(VerdictBasis::TailModel) }
            }
            None => TraceClassVerdict { verdict: TraceClass::Undecided, basis: VerdictBasis::HorizonOnly },
        },
        Profile::LogStep(s) => {
            let masses: Vec<f64> = s
                .pieces()
                .map(|(a, b, v)| -v + ln_diff_exp(b, if a.is_finite() { a } else { f64::NEG_INFINITY }))
                .collect();
            let k = (masses.len() / 4).max(3).min(masses.len());
            let tail = &masses[masses.len() - k..];
            let verdict = if k >= 3 && tail.windows(2).all(|w| w[1] > w[0]) {
                TraceClass::NotTraceClass
            } else if k >= 3 && tail.windows(2).all(|w| w[1] - w[0] <= -std::f64::consts::LN_2) {
                TraceClass::TraceClass
            } else {
                TraceClass::Undecided
            };
            TraceClassVerdict { verdict, basis: VerdictBasis::HorizonOnly }
        }
        Profile::Shifted { inner, .. } => trace_class_of(inner),
        Profile::Min(f, g) => {
            let (a, b) = (trace_class_of(f), trace_class_of(g));
            let verdict = match (a.verdict, b.verdict) {
                (TraceClass::TraceClass, TraceClass::TraceClass) => TraceClass::TraceClass,
                (TraceClass::NotTraceClass, _) | (_, TraceClass::NotTraceClass) => TraceClass::NotTraceClass,
                _ => TraceClass::Undecided,
            };
            TraceClassVerdict { verdict, basis: a.basis.max(b.basis) }
        }
        other => {
            let e = other.expansion().expect("closed-form families carry an expansion");
            TraceClassVerdict::exact(e.integrable())
        }
    }
}

/// The branch `S` uses for this function.
pub fn branch(mu: &EigenvalueFunction) -> Result<Branch> {
    is_trace_class(mu).branch()
}

fn check_x(x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x.ln())
    } else {
        Err(Error::InvalidArgument(format!("evaluation point must be positive and finite, got {x}")))
    }
}

fn zero_s_error(p: &Profile, t: f64) -> Error {
    match p.support_end() {
        Some(end) => Error::SupportExceeded { x: t.exp(), support_end: end },
        None => Error::ZeroDenominator(t.exp()),
    }
}

/// `S(x)` on the branch selected by the trace-class verdict.
pub fn s(mu: &EigenvalueFunction, x: f64) -> Result<f64> {
    let t = check_x(x)?;
    let br = branch(mu)?;
    let ls = ln_s(mu.profile(), br, t)?;
    if ls == f64::NEG_INFINITY {
        return Err(zero_s_error(mu.profile(), t));
    }
    Ok(ls.exp())
}

/// `S(λx) / S(x)` for `λ > 1`.
pub fn s_ratio(mu: &EigenvalueFunction, lambda: f64, x: f64) -> Result<f64> {
    let t = check_x(x)?;
    check_lambda(lambda)?;
    let br = branch(mu)?;
    Ok(ln_s_ratio(mu.profile(), br, lambda.ln(), t)?.exp())
}

/// `x μ(x) / S(x)`.
pub fn mu_over_s(mu: &EigenvalueFunction, x: f64) -> Result<f64> {
    let t = check_x(x)?;
    let br = branch(mu)?;
    Ok(ln_mu_over_s(mu.profile(), br, t)?.exp())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("ratio factor must exceed 1, got {lambda}")))
    }
}

/// `ln S(λ e^t) - ln S(e^t)` with `ln_lambda = ln λ`.
pub fn ln_s_ratio(p: &Profile, br: Branch, ln_lambda: f64, t: f64) -> Result<f64> {
    match p {
        Profile::Exponential { alpha } if br == Branch::Down => {
            Ok(-alpha * ln_lambda.exp_m1() * t.exp())
        }
        Profile::Shifted { inner, a, .. } => ln_s_ratio(inner, br, ln_lambda, t - a),
        _ => {
            let lo = ln_s(p, br, t)?;
            if lo == f64::NEG_INFINITY {
                return Err(zero_s_error(p, t));
            }
            Ok(ln_s(p, br, t + ln_lambda)? - lo)
        }
    }
}

/// `ln(x μ(x) / S(x))` at `x = e^t`.
pub fn ln_mu_over_s(p: &Profile, br: Branch, t: f64) -> Result<f64> {
    match p {
        Profile::Exponential { alpha } if br == Branch::Down => Ok(t + alpha.ln()),
        Profile::Shifted { inner, a, .. } => ln_mu_over_s(inner, br, t - a),
        _ => {
            let ls = ln_s(p, br, t)?;
            if ls == f64::NEG_INFINITY {
                return Err(zero_s_error(p, t));
            }
            Ok(t - p.g(t) - ls)
        }
    }
}

/// `ln S↑(e^t)` or `ln S↓(e^t)`. Returns `-∞` where the integral vanishes and
/// `+∞` for `S↓` of a function outside L¹.
pub fn ln_s(p: &Profile, br: Branch, t: f64) -> Result<f64> {
    match p {
        Profile::PowerLog(pl) => power_log_ln_s(pl, br, t),
        Profile::Exponential { alpha } => Ok(match br {
            Branch::Down => -alpha * t.exp() - alpha.ln(),
            Branch::Up => (-(-alpha * t.exp()).exp_m1()).ln() - alpha.ln(),
        }),
        Profile::GLinear { slope, intercept } => Ok(g_linear_ln_s(*slope, *intercept, br, t)),
        Profile::Step(s) => {
            let x = t.exp();
            Ok(match br {
                Branch::Up => s.integral_to(x),
                Branch::Down => s.integral_from(x),
            }
            .ln())
        }
        Profile::LogStep(s) => Ok(match br {
            Branch::Up => s
                .pieces()
                .take_while(|&(a, _, _)| a < t)
                .map(|(a, b, v)| -v + ln_diff_exp(b.min(t), a))
                .fold(f64::NEG_INFINITY, ln_add),
            // nothing is known past a horizon tail; it contributes zero
            Branch::Down => s
                .pieces()
                .filter(|&(_, b, _)| b > t)
                .map(|(a, b, v)| -v + ln_diff_exp(b, a.max(t)))
                .fold(f64::NEG_INFINITY, ln_add),
        }),
        Profile::Sampled(s) => sampled_ln_s(s, br, t),
        Profile::Shifted { inner, a, b } => Ok(a - b + ln_s(inner, br, t - a)?),
        Profile::Min(..) => ln_s_numeric(p, br, t),
    }
}

/// Generic route: adaptive quadrature of `μ(e^u) e^u` in `u = ln y`.
pub fn ln_s_numeric(p: &Profile, br: Branch, t: f64) -> Result<f64> {
    let integrand = |u: f64| p.ln_density(u);
    match br {
        Branch::Up => {
            let head_end = t.exp().min(1.0);
            let head = integrate(|y| p.mu(y), 0.0, head_end, QUAD_TOL)?.value.ln();
            if t <= 0.0 {
                Ok(head)
            } else {
                Ok(ln_add(head, ln_integrate(integrand, 0.0, t, QUAD_TOL)?))
            }
        }
        Branch::Down => ln_integrate_to_infinity(integrand, t, QUAD_TOL),
    }
}

/// `ln(1 + e^t / s)`.
fn ln_ratio_to_offset(t: f64, shift: f64) -> f64 {
    if t < 700.0 {
        (t.exp() / shift).ln_1p()
    } else {
        t - shift.ln() + (shift * (-t).exp()).ln_1p()
    }
}

/// `ln(e^y - 1)` for `y > 0`.
fn ln_expm1(y: f64) -> f64 {
    if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

fn power_log_ln_s(pl: &PowerLog, br: Branch, t: f64) -> Result<f64> {
    let PowerLog { scale, p, q, shift } = *pl;
    let ln_c = scale.ln();
    if br == Branch::Down && !pl.integrable() {
        return Ok(f64::INFINITY);
    }
    if q == 0.0 {
        let r = ln_ratio_to_offset(t, shift);
        return Ok(if p < 1.0 {
            match br {
                Branch::Up => ln_c + (1.0 - p) * shift.ln() + ln_expm1((1.0 - p) * r) - (1.0 - p).ln(),
                Branch::Down => unreachable!("checked integrability"),
            }
        } else if p == 1.0 {
            match br {
                Branch::Up => ln_c + r.ln(),
                Branch::Down => unreachable!("checked integrability"),
            }
        } else {
            // p > 1: S↑ = C s^{1-p} (1 - (1 + x/s)^{1-p}) / (p - 1), S↓ = C (x+s)^{1-p} / (p - 1)
            match br {
                Branch::Up => ln_c + (1.0 - p) * shift.ln() + (-((1.0 - p) * r).exp_m1()).ln() - (p - 1.0).ln(),
                Branch::Down => ln_c + (1.0 - p) * pl.log_argument(t) - (p - 1.0).ln(),
            }
        });
    }
    if p == 1.0 {
        // u = ln(x+s): ∫ u^{-q} du
        let u0 = shift.ln();
        let u = pl.log_argument(t);
        let rel = (ln_ratio_to_offset(t, shift) / u0).ln_1p(); // ln(u / u0)
        return Ok(match br {
            Branch::Up if q == 1.0 => ln_c + rel.ln(),
            Branch::Up if q < 1.0 => ln_c + (1.0 - q) * u0.ln() + ln_expm1((1.0 - q) * rel) - (1.0 - q).ln(),
            Branch::Up => ln_c + (1.0 - q) * u0.ln() + (-((1.0 - q) * rel).exp_m1()).ln() - (q - 1.0).ln(),
            Branch::Down => ln_c + (1.0 - q) * u.ln() - (q - 1.0).ln(),
        });
    }
    ln_s_numeric(&Profile::PowerLog(*pl), br, t)
}

fn g_linear_ln_s(slope: f64, intercept: f64, br: Branch, t: f64) -> f64 {
    let s = slope;
    match br {
        Branch::Up => {
            if t <= 0.0 {
                -intercept + t
            } else if s < 1.0 {
                -intercept + ln_add(0.0, ln_expm1((1.0 - s) * t) - (1.0 - s).ln())
            } else if s == 1.0 {
                -intercept + t.ln_1p()
            } else {
                -intercept + ln_add(0.0, (-((1.0 - s) * t).exp_m1()).ln() - (s - 1.0).ln())
            }
        }
        Branch::Down => {
            if s <= 1.0 {
                f64::INFINITY
            } else if t >= 0.0 {
                -intercept + (1.0 - s) * t - (s - 1.0).ln()
            } else {
                -intercept + (-t.exp_m1() + 1.0 / (s - 1.0)).ln()
            }
        }
    }
}

fn sampled_ln_s(s: &Sampled, br: Branch, t: f64) -> Result<f64> {
    let x = t.exp();
    let grid = s.grid();
    let values = s.values();
    let x_last = s.last_x();
    // head piece [0, grid[0]) carries values[0]
    let pieces = std::iter::once((0.0, grid[0], values[0]))
        .chain(grid.windows(2).zip(values).map(|(w, &v)| (w[0], w[1], v)))
        .filter(|&(a, b, _)| b > a);
    let t_last = x_last.ln();
    match br {
        Branch::Up => {
            let body: f64 = pieces.take_while(|&(a, _, _)| a < x).map(|(a, b, v)| v * (b.min(x) - a)).sum();
            let mut acc = body.ln();
            if x > x_last {
                let extra = match s.tail() {
                    Some(tail) => tail_segment(tail, t_last, t)?,
                    None => (s.last_value() * (x - x_last)).ln(),
                };
                acc = ln_add(acc, extra);
            }
            Ok(acc)
        }
        Branch::Down => {
            let body: f64 = pieces.filter(|&(_, b, _)| b > x).map(|(a, b, v)| v * (b - a.max(x))).sum();
            let rest = match s.tail() {
                Some(tail) => ln_s(tail, Branch::Down, t.max(t_last))?,
                None => f64::NEG_INFINITY,
            };
            Ok(ln_add(body.ln(), rest))
        }
    }
}

/// `ln ∫_{e^t0}^{e^t1} tail`.
fn tail_segment(tail: &Profile, t0: f64, t1: f64) -> Result<f64> {
    if trace_class_of(tail).verdict == TraceClass::TraceClass {
        Ok(ln_diff_exp(ln_s(tail, Branch::Down, t0)?, ln_s(tail, Branch::Down, t1)?))
    } else {
        Ok(ln_diff_exp(ln_s(tail, Branch::Up, t1)?, ln_s(tail, Branch::Up, t0)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{rearrange, LogStep, SpectralData};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn trace_class_examples() {
        let v = is_trace_class(&EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap());
        assert_eq!(v, TraceClassVerdict { verdict: TraceClass::TraceClass, basis: VerdictBasis::Exact });
        let v = is_trace_class(&EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap());
        assert_eq!(v.verdict, TraceClass::NotTraceClass);
        assert_eq!(v.basis, VerdictBasis::Exact);
        let sampled = EigenvalueFunction::new(Profile::Sampled(
            Sampled::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.25], None).unwrap(),
        ))
        .unwrap();
        let v = is_trace_class(&sampled);
        assert_eq!(v.verdict, TraceClass::Undecided);
        assert_eq!(v.basis, VerdictBasis::HorizonOnly);
        assert_eq!(s(&sampled, 1.0), Err(Error::UndecidedBranch));
    }

    #[test]
    fn power_log_trace_class_boundary() {
        for (p, q, tc) in [(1.0, 1.0, false), (1.0, 1.5, true), (1.01, -3.0, true), (0.99, 5.0, false)] {
            let mu = EigenvalueFunction::power_log(1.0, p, q);
            if let Ok(mu) = mu {
                assert_eq!(is_trace_class(&mu).verdict == TraceClass::TraceClass, tc, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn s_closed_forms() {
        let harmonic = EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap();
        let exp = EigenvalueFunction::exponential(1.0).unwrap();
        for x in [0.01, 1.0, 10.0, 1e6] {
            assert!(rel(s(&harmonic, x).unwrap(), (1.0 + x).ln()) < 1e-13);
            if x < 700.0 {
                assert!(rel(s(&exp, x).unwrap(), (-x).exp()) < 1e-13);
            }
        }
    }

    #[test]
    fn s_of_finite_rank_step() {
        let data = SpectralData::new(vec![(3.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        let mu = rearrange(&data);
        // finite rank is trace class: the down branch applies
        assert_eq!(branch(&mu).unwrap(), Branch::Down);
        assert!((s(&mu, 2.0).unwrap() - 1.0).abs() < 1e-15);
        // the up branch would give 3 + 2
        assert!((ln_s(mu.profile(), Branch::Up, 2f64.ln()).unwrap().exp() - 5.0).abs() < 1e-14);
        assert!(matches!(s(&mu, 3.0), Err(Error::SupportExceeded { .. })));
        assert!(matches!(mu_over_s(&mu, 4.0), Err(Error::SupportExceeded { .. })));
    }

    #[test]
    fn ratio_examples() {
        let harmonic = EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap();
        let inv_sq = EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap();
        let exp = EigenvalueFunction::exponential(1.0).unwrap();
        for x in [1.0, 100.0, 1e5] {
            let r = s_ratio(&harmonic, 2.0, x).unwrap();
            assert!(rel(r, (1.0 + 2.0 * x).ln() / (1.0 + x).ln()) < 1e-12);
            let r = s_ratio(&inv_sq, 2.0, x).unwrap();
            assert!(rel(r, (1.0 + x) / (1.0 + 2.0 * x)) < 1e-12);
            let r = s_ratio(&exp, 2.0, x).unwrap();
            assert!((r - (-x).exp()).abs() <= 1e-12 * (-x).exp());
        }
        assert!(s_ratio(&harmonic, 1.0, 1.0).is_err());
    }

    #[test]
    fn mu_over_s_examples() {
        let harmonic = EigenvalueFunction::reciprocal_power(1.0, 1.0).unwrap();
        let inv_sq = EigenvalueFunction::reciprocal_power(1.0, 2.0).unwrap();
        let exp = EigenvalueFunction::exponential(1.0).unwrap();
        for x in [1.0, 50.0, 1e6] {
            assert!(rel(mu_over_s(&harmonic, x).unwrap(), x / ((1.0 + x) * (1.0 + x).ln())) < 1e-12);
            assert!(rel(mu_over_s(&inv_sq, x).unwrap(), x / (1.0 + x)) < 1e-12);
            assert!(rel(mu_over_s(&exp, x).unwrap(), x) < 1e-12);
        }
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        let fams = [
            (EigenvalueFunction::power(0.25).unwrap(), Branch::Up),
            (EigenvalueFunction::power(1.0).unwrap(), Branch::Up),
            (EigenvalueFunction::power(3.0).unwrap(), Branch::Down),
            (EigenvalueFunction::power_log(1.0, 1.0, -1.0).unwrap(), Branch::Up),
            (EigenvalueFunction::power_log(1.0, 1.0, 0.5).unwrap(), Branch::Up),
            (EigenvalueFunction::power_log(2.0, 1.0, 1.0).unwrap(), Branch::Up),
            (EigenvalueFunction::power_log(1.0, 1.0, 2.0).unwrap(), Branch::Down),
            (EigenvalueFunction::exponential(0.7).unwrap(), Branch::Down),
            (EigenvalueFunction::new(Profile::GLinear { slope: 0.5, intercept: 1.0 }).unwrap(), Branch::Up),
            (EigenvalueFunction::new(Profile::GLinear { slope: 2.0, intercept: 0.0 }).unwrap(), Branch::Down),
        ];
        for (mu, br) in &fams {
            for t in [-2.0, 0.0, 1.0, 5.0, 12.0] {
                let closed = ln_s(mu.profile(), *br, t).unwrap();
                let numeric = ln_s_numeric(mu.profile(), *br, t).unwrap();
                assert!((closed - numeric).abs() < 1e-10, "{mu:?} t={t}: {closed} vs {numeric}");
            }
        }
    }

    #[test]
    fn general_power_log_uses_quadrature() {
        // p = 0.5, q = 1: compare against direct quadrature in x
        let mu = EigenvalueFunction::power_log(1.0, 0.5, 1.0).unwrap();
        let x: f64 = 200.0;
        let direct = integrate(|y| mu.eval(y), 0.0, x, 1e-13).unwrap().value;
        assert!(rel(s(&mu, x).unwrap(), direct) < 1e-10);
    }

    #[test]
    fn shifted_integral_scales() {
        let mu = EigenvalueFunction::power(0.5).unwrap();
        let shifted = mu.profile().shifted(1.0, 0.5);
        for t in [0.0, 3.0, 9.0] {
            let lhs = ln_s(&shifted, Branch::Up, t).unwrap();
            let rhs = ln_s_numeric(&shifted, Branch::Up, t).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn log_step_sums_match_direct_sums() {
        let s = LogStep::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.5, 1.0, 2.0], crate::function::LogStepTail::Infinite).unwrap();
        let p = Profile::LogStep(s);
        // μ = e^{-0.5} on [0, e^1), e^{-1} on [e, e^2), e^{-2} on [e^2, e^3)
        let e = std::f64::consts::E;
        let up = ln_s(&p, Branch::Up, 1.5).unwrap().exp();
        let expect = (-0.5f64).exp() * e + (-1.0f64).exp() * (1.5f64.exp() - e);
        assert!(rel(up, expect) < 1e-14);
        let down = ln_s(&p, Branch::Down, 1.5).unwrap().exp();
        let expect = (-1.0f64).exp() * (e * e - 1.5f64.exp()) + (-2.0f64).exp() * (e.powi(3) - e * e);
        assert!(rel(down, expect) < 1e-14);
    }

    #[test]
    fn sampled_with_tail_model() {
        let tail = Profile::PowerLog(PowerLog { scale: 1.0, p: 2.0, q: 0.0, shift: 1.0 });
        let grid = vec![0.0, 1.0, 2.0, 4.0];
        let values: Vec<f64> = grid.iter().map(|&x| tail.mu(x)).collect();
        let sampled = EigenvalueFunction::new(Profile::Sampled(Sampled::new(grid, values, Some(tail)).unwrap())).unwrap();
        let v = is_trace_class(&sampled);
        assert_eq!(v.verdict, TraceClass::TraceClass);
        assert_eq!(v.basis, VerdictBasis::TailModel);
        // beyond the grid only the tail contributes: ∫_x^∞ (1+y)^{-2} = 1/(1+x)
        assert!(rel(s(&sampled, 10.0).unwrap(), 1.0 / 11.0) < 1e-13);
    }
}
