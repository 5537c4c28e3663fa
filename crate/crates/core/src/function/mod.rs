//! Eigenvalue functions `μ` (non-increasing, infinitesimal, right-continuous on
//! `[0, ∞)`) and their logarithmic coordinate `g(t) = -ln μ(e^t)`.
//!
//! Both views share one representation, [`Profile`]. Every representation
//! evaluates `μ` and `g` natively, so `g` stays accurate where `μ` under- or
//! overflows, and `+∞` in `g` is IEEE infinity (finite rank).

mod asymptotic;
mod power;
mod spectrum;
mod step;

pub use asymptotic::Expansion;
pub use power::PowerLog;
pub use spectrum::{rearrange, DistributionFunction, SpectralData};
pub use step::{LogStep, LogStepTail, Step};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a non-increasing function on an increasing grid, read as a
/// right-continuous step function. Past the last grid point the optional tail
/// model takes over; without one the data only speaks for `[0, grid_last]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampled {
    grid: Vec<f64>,
    values: Vec<f64>,
    tail: Option<Box<Profile>>,
}

impl Sampled {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, tail: Option<Profile>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidFunction(m));
        if grid.len() < 2 || grid.len() != values.len() {
            return bad(format!(
                "sampled needs at least two points and equal lengths, got grid {} and values {}",
                grid.len(),
                values.len()
            ));
        }
        if grid.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return bad("sampled grid must be finite and non-negative".into());
        }
        if let Some(i) = grid.windows(2).position(|w| w[0] >= w[1]) {
            return bad(format!("sampled grid must be strictly increasing (index {})", i + 1));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad(format!("sampled value at index {i} must be finite and non-negative"));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] > w[0]) {
            return bad(format!("sampled values must be non-increasing (index {})", i + 1));
        }
        let last = values[values.len() - 1];
        match &tail {
            Some(model) => {
                model.validate()?;
                let x_last = grid[grid.len() - 1];
                if model.mu(x_last) > last * (1.0 + 1e-12) {
                    return bad(format!(
                        "tail model value {} at the last grid point exceeds the last sample {last}",
                        model.mu(x_last)
                    ));
                }
            }
            None => {
                if last > 0.0 && last >= values[0] {
                    return Err(Error::NotInfinitesimal);
                }
            }
        }
        Ok(Self { grid, values, tail: tail.map(Box::new) })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> Option<&Profile> {
        self.tail.as_deref()
    }

    pub fn last_x(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    fn mu(&self, x: f64) -> f64 {
        if x >= self.last_x() {
            if let Some(tail) = &self.tail {
                return tail.mu(x).min(self.last_value());
            }
            return self.last_value();
        }
        let i = self.grid.partition_point(|&b| b <= x);
        self.values[i.saturating_sub(1)]
    }

    fn g(&self, t: f64) -> f64 {
        let floor = -self.last_value().ln();
        match &self.tail {
            Some(tail) if t >= self.last_x().ln() => tail.g(t).max(floor),
            _ => -self.mu(t.exp()).ln(),
        }
    }
}

/// Shared representation of an eigenvalue function and its g-coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    PowerLog(PowerLog),
    /// `μ(x) = e^{-αx}`, `g(t) = α e^t`.
    Exponential { alpha: f64 },
    /// `g(t) = intercept + slope·max(t, 0)`, i.e. `μ(x) = e^{-intercept}·min(1, x^{-slope})`.
    GLinear { slope: f64, intercept: f64 },
    Step(Step),
    LogStep(LogStep),
    Sampled(Sampled),
    /// `t ↦ b + g(t - a)`, i.e. `μ(x) = e^{-b}·μ(x e^{-a})`.
    Shifted { inner: Box<Profile>, a: f64, b: f64 },
    /// Pointwise minimum of g-functions (maximum of eigenvalue functions).
    Min(Box<Profile>, Box<Profile>),
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::PowerLog(p) => p.validate(),
            Profile::Exponential { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidFunction(format!("exponential rate must be positive, got {alpha}")))
                }
            }
            Profile::GLinear { slope, intercept } => {
                if !intercept.is_finite() || !slope.is_finite() || *slope < 0.0 {
                    Err(Error::InvalidFunction(format!(
                        "g_linear needs finite intercept and slope >= 0, got slope {slope}, intercept {intercept}"
                    )))
                } else if *slope == 0.0 {
                    Err(Error::NotInfinitesimal)
                } else {
                    Ok(())
                }
            }
            // validated on construction
            Profile::Step(_) | Profile::LogStep(_) | Profile::Sampled(_) => Ok(()),
            Profile::Shifted { inner, a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidFunction(format!("shift ({a}, {b}) must be finite")));
                }
                inner.validate()
            }
            Profile::Min(f, g) => {
                f.validate()?;
                g.validate()
            }
        }
    }

    /// `μ(x)` for `x ≥ 0`.
    pub fn mu(&self, x: f64) -> f64 {
        match self {
            Profile::PowerLog(p) => p.mu(x),
            Profile::Exponential { alpha } => (-alpha * x).exp(),
            Profile::GLinear { slope, intercept } => {
                let base = (-intercept).exp();
                if x <= 1.0 {
                    base
                } else {
                    base * x.powf(-slope)
                }
            }
            Profile::Step(s) => s.eval(x),
            Profile::LogStep(s) => (-s.eval(x.ln())).exp(),
            Profile::Sampled(s) => s.mu(x),
            Profile::Shifted { inner, a, b } => (-b).exp() * inner.mu(x * (-a).exp()),
            Profile::Min(f, g) => f.mu(x).max(g.mu(x)),
        }
    }

    /// `g(t) = -ln μ(e^t)`, possibly `+∞`.
    pub fn g(&self, t: f64) -> f64 {
        match self {
            Profile::PowerLog(p) => p.g(t),
            Profile::Exponential { alpha } => alpha * t.exp(),
            Profile::GLinear { slope, intercept } => intercept + slope * t.max(0.0),
            Profile::Step(s) => -s.eval(t.exp()).ln(),
            Profile::LogStep(s) => s.eval(t),
            Profile::Sampled(s) => s.g(t),
            Profile::Shifted { inner, a, b } => b + inner.g(t - a),
            Profile::Min(f, g) => f.g(t).min(g.g(t)),
        }
    }

    /// `ln(μ(e^u)·e^u)`, the log-integrand of `∫ μ(y) dy` in `u = ln y`.
    pub fn ln_density(&self, u: f64) -> f64 {
        match self {
            Profile::PowerLog(p) if u > 0.0 => {
                let l = p.log_argument(u);
                let mut v = (1.0 - p.p) * u - p.p * (p.shift * (-u).exp()).ln_1p() + p.scale.ln();
                if p.q != 0.0 {
                    v -= p.q * l.ln();
                }
                v
            }
            Profile::Shifted { inner, a, b } => inner.ln_density(u - a) + a - b,
            Profile::Min(f, g) => f.ln_density(u).max(g.ln_density(u)),
            _ => u - self.g(u),
        }
    }

    /// Upper end (in `t = ln x`) of the range where the representation is
    /// known. `None` when it is defined on all of `[0, ∞)`.
    pub fn horizon(&self) -> Option<f64> {
        match self {
            Profile::LogStep(s) if s.tail() == LogStepTail::Horizon => Some(s.last_breakpoint()),
            Profile::Sampled(s) if s.tail.is_none() && s.last_value() > 0.0 => Some(s.last_x().ln()),
            Profile::Shifted { inner, a, .. } => inner.horizon().map(|h| h + a),
            Profile::Min(f, g) => match (f.horizon(), g.horizon()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            _ => None,
        }
    }

    pub fn is_finite_rank(&self) -> bool {
        match self {
            Profile::Step(_) => true,
            Profile::LogStep(s) => s.tail() == LogStepTail::Infinite,
            Profile::Sampled(s) => s.last_value() == 0.0,
            Profile::Shifted { inner, .. } => inner.is_finite_rank(),
            Profile::Min(f, g) => f.is_finite_rank() && g.is_finite_rank(),
            _ => false,
        }
    }

    /// For finite-rank functions, the point `x` from which `μ` vanishes.
    pub fn support_end(&self) -> Option<f64> {
        if !self.is_finite_rank() {
            return None;
        }
        match self {
            Profile::Step(s) => Some(s.support_end()),
            Profile::LogStep(s) => {
                let first_inf = s.values().iter().position(|v| v.is_infinite());
                let t = first_inf.map_or(s.last_breakpoint(), |i| s.breakpoints()[i]);
                Some(t.exp())
            }
            Profile::Sampled(s) => {
                let i = s.values.iter().position(|&v| v == 0.0).expect("finite rank");
                Some(if i == 0 { 0.0 } else { s.grid[i] })
            }
            Profile::Shifted { inner, a, .. } => inner.support_end().map(|x| x * a.exp()),
            Profile::Min(f, g) => Some(f.support_end()?.max(g.support_end()?)),
            _ => None,
        }
    }

    /// Asymptotic expansion of `g`, when the representation has one.
    pub fn expansion(&self) -> Option<Expansion> {
        match self {
            Profile::PowerLog(p) => Some(Expansion::power_log(p.scale, p.p, p.q)),
            Profile::Exponential { alpha } => {
                Some(Expansion { exp_rate: *alpha, slope: 0.0, log_coef: 0.0, constant: 0.0 })
            }
            Profile::GLinear { slope, intercept } => {
                Some(Expansion { exp_rate: 0.0, slope: *slope, log_coef: 0.0, constant: *intercept })
            }
            Profile::Sampled(s) => s.tail().and_then(Profile::expansion),
            Profile::Shifted { inner, a, b } => inner.expansion().map(|e| e.shifted(*a, *b)),
            // a finite-rank member is eventually +∞ and drops out of the minimum
            Profile::Min(f, g) if f.is_finite_rank() => g.expansion(),
            Profile::Min(f, g) if g.is_finite_rank() => f.expansion(),
            Profile::Min(f, g) => Some(f.expansion()?.lex_min(g.expansion()?)),
            Profile::Step(_) | Profile::LogStep(_) => None,
        }
    }

    /// Jump locations of `g` when it is piecewise constant in `t`.
    pub fn g_breakpoints(&self) -> Option<Vec<f64>> {
        match self {
            Profile::Step(s) => Some(s.breakpoints()[1..].iter().map(|x| x.ln()).collect()),
            Profile::LogStep(s) => Some(s.breakpoints().to_vec()),
            Profile::Sampled(s) if s.tail.is_none() => {
                Some(s.grid.iter().filter(|&&x| x > 0.0).map(|x| x.ln()).collect())
            }
            Profile::Shifted { inner, a, .. } => {
                inner.g_breakpoints().map(|v| v.into_iter().map(|t| t + a).collect())
            }
            Profile::Min(f, g) => {
                let mut v = f.g_breakpoints()?;
                v.extend(g.g_breakpoints()?);
                v.sort_by(f64::total_cmp);
                v.dedup();
                Some(v)
            }
            _ => None,
        }
    }

    /// `b + g(t - a)`, merging nested shifts.
    pub fn shifted(&self, a: f64, b: f64) -> Profile {
        let (inner, a, b) = match self {
            Profile::Shifted { inner, a: a0, b: b0 } => (inner.as_ref(), a0 + a, b0 + b),
            other => (other, a, b),
        };
        if a == 0.0 && b == 0.0 {
            inner.clone()
        } else {
            Profile::Shifted { inner: Box::new(inner.clone()), a, b }
        }
    }
}

/// An element of `M`: non-increasing, infinitesimal, right-continuous on `[0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EigenvalueFunction(Profile);

/// An element of `G`: non-decreasing, right-continuous, bounded below and
/// unbounded above, with values in `(-∞, +∞]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GFunction(Profile);

impl EigenvalueFunction {
    pub fn new(profile: Profile) -> Result<Self> {
        profile.validate()?;
        Ok(Self(profile))
    }

    pub(crate) fn from_valid(profile: Profile) -> Self {
        Self(profile)
    }

    /// `C·(x+e)^(-p)·ln(x+e)^(-q)`.
    pub fn power_log(scale: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(Profile::PowerLog(PowerLog::new(scale, p, q)))
    }

    /// `(x+e)^(-p)`.
    pub fn power(p: f64) -> Result<Self> {
        Self::power_log(1.0, p, 0.0)
    }

    /// `C·(1+x)^(-p)`.
    pub fn reciprocal_power(scale: f64, p: f64) -> Result<Self> {
        Self::new(Profile::PowerLog(PowerLog { scale, p, q: 0.0, shift: 1.0 }))
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        Self::new(Profile::Exponential { alpha })
    }

    pub fn profile(&self) -> &Profile {
        &self.0
    }

    pub fn into_profile(self) -> Profile {
        self.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.mu(x)
    }

    pub fn is_finite_rank(&self) -> bool {
        self.0.is_finite_rank()
    }

    pub fn horizon(&self) -> Option<f64> {
        self.0.horizon()
    }
}

impl GFunction {
    pub fn new(profile: Profile) -> Result<Self> {
        profile.validate()?;
        Ok(Self(profile))
    }

    /// `g(t) = intercept + slope·max(t, 0)`.
    pub fn linear(slope: f64, intercept: f64) -> Result<Self> {
        Self::new(Profile::GLinear { slope, intercept })
    }

    pub fn profile(&self) -> &Profile {
        &self.0
    }

    pub fn into_profile(self) -> Profile {
        self.0
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.g(t)
    }

    pub fn is_finite_rank(&self) -> bool {
        self.0.is_finite_rank()
    }

    pub fn horizon(&self) -> Option<f64> {
        self.0.horizon()
    }
}

/// `g(t) = -ln μ(e^t)`. Representation-preserving.
pub fn g_transform(mu: &EigenvalueFunction) -> GFunction {
    GFunction(mu.0.clone())
}

/// `μ(x) = e^{-g(ln x)}`.
pub fn g_inverse(g: &GFunction) -> Result<EigenvalueFunction> {
    match &g.0 {
        Profile::LogStep(s) if s.tail() == LogStepTail::Horizon => {
            let v = s.values();
            if v[v.len() - 1] <= v[0] {
                return Err(Error::NotInfinitesimal);
            }
        }
        _ => g.0.validate()?,
    }
    Ok(EigenvalueFunction(g.0.clone()))
}

/// `D_λ μ(t) = λ μ(λ t)`.
pub fn dilate(mu: &EigenvalueFunction, lambda: f64) -> Result<EigenvalueFunction> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let l = -lambda.ln();
    Ok(EigenvalueFunction(mu.0.shifted(l, l)))
}

/// `t ↦ b + g(t - a)`.
pub fn shift(g: &GFunction, a: f64, b: f64) -> GFunction {
    GFunction(g.0.shifted(a, b))
}

/// `(f ∧ g)(t) = min(f(t), g(t))`.
pub fn pointwise_min(f: &GFunction, g: &GFunction) -> GFunction {
    if f == g {
        return f.clone();
    }
    GFunction(Profile::Min(Box::new(f.0.clone()), Box::new(g.0.clone())))
}
