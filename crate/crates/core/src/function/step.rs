use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-continuous step function on `[0, ∞)` with closed-open pieces
/// `[breakpoints[i], breakpoints[i+1])` carrying `values[i]`, and zero past the
/// last breakpoint. Always of finite rank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl Step {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidFunction(m));
        if breakpoints.first() != Some(&0.0) {
            return bad("step breakpoints must start at 0".into());
        }
        if breakpoints.len() != values.len() + 1 {
            return bad(format!(
                "step needs one more breakpoint than values, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            ));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| !(w[0] < w[1] && w[1].is_finite())) {
            return bad(format!("step breakpoints must be finite and strictly increasing (index {})", i + 1));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad(format!("step value at index {i} must be finite and non-negative"));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] > w[0]) {
            return bad(format!("step values must be non-increasing (index {})", i + 1));
        }
        Ok(Self { breakpoints, values })
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self { breakpoints: vec![0.0], values: vec![] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        if i == 0 {
            // x < 0 only
            self.values.first().copied().unwrap_or(0.0)
        } else {
            self.values.get(i - 1).copied().unwrap_or(0.0)
        }
    }

    /// End of the support: μ vanishes on `[support_end, ∞)`.
    pub fn support_end(&self) -> f64 {
        match self.values.iter().rposition(|&v| v > 0.0) {
            Some(i) => self.breakpoints[i + 1],
            None => 0.0,
        }
    }

    /// `∫_0^x μ`, exact.
    pub fn integral_to(&self, x: f64) -> f64 {
        self.pieces()
            .take_while(|&(a, _, _)| a < x)
            .map(|(a, b, v)| v * (b.min(x) - a))
            .sum()
    }

    /// `∫_x^∞ μ`, exact.
    pub fn integral_from(&self, x: f64) -> f64 {
        self.pieces()
            .filter(|&(_, b, _)| b > x)
            .map(|(a, b, v)| v * (b - a.max(x)))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.integral_from(0.0)
    }

    /// Pieces `(start, end, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }
}

/// What a [`LogStep`] does past its last breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogStepTail {
    /// `g = +∞` past the last breakpoint (finite rank).
    Infinite,
    /// Unknown past the last breakpoint; every asymptotic computation is
    /// restricted to the breakpoint range.
    Horizon,
}

/// Right-continuous step function in logarithmic coordinates `t = ln x`, stored
/// as g-values: `g = values[i]` on `[breakpoints[i], breakpoints[i+1])` and
/// `values[0]` before the first breakpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    tail: LogStepTail,
}

impl LogStep {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, tail: LogStepTail) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidFunction(m));
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return bad(format!(
                "log step needs one more breakpoint than values and at least one value, got {} and {}",
                breakpoints.len(),
                values.len()
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return bad("log step breakpoints must be finite".into());
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return bad(format!("log step breakpoints must be strictly increasing (index {})", i + 1));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) || values[0].is_infinite() {
            return bad("log step values must be bounded below and not NaN".into());
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return bad(format!("log step values must be non-decreasing (index {})", i + 1));
        }
        if tail == LogStepTail::Horizon && values[values.len() - 1] <= values[0] {
            return Err(Error::NotInfinitesimal);
        }
        Ok(Self { breakpoints, values, tail })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> LogStepTail {
        self.tail
    }

    pub fn last_breakpoint(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= t);
        if i == 0 {
            self.values[0]
        } else if i >= self.breakpoints.len() {
            match self.tail {
                LogStepTail::Infinite => f64::INFINITY,
                LogStepTail::Horizon => self.values[self.values.len() - 1],
            }
        } else {
            self.values[i - 1]
        }
    }

    /// Pieces `(start, end, g-value)` in t-coordinates, the first one open to `-∞`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        std::iter::once((f64::NEG_INFINITY, self.breakpoints[1], self.values[0])).chain(
            self.breakpoints[1..]
                .windows(2)
                .zip(&self.values[1..])
                .map(|(w, &v)| (w[0], w[1], v)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_right_continuous() {
        let s = Step::new(vec![0.0, 1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(s.eval(0.0), 3.0);
        assert_eq!(s.eval(0.999), 3.0);
        assert_eq!(s.eval(1.0), 2.0);
        assert_eq!(s.eval(3.0), 0.0);
        assert_eq!(s.support_end(), 3.0);
        assert_eq!(s.total_mass(), 6.0);
        assert_eq!(s.integral_to(2.0), 5.0);
        assert_eq!(s.integral_from(2.0), 1.0);
    }

    #[test]
    fn step_rejects_bad_shapes() {
        assert!(Step::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(Step::new(vec![0.0, 2.0], vec![1.0, 0.5]).is_err());
        assert!(Step::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0]).is_err());
        assert!(Step::new(vec![0.0, 1.0], vec![-1.0]).is_err());
    }

    #[test]
    fn log_step_eval_and_tail() {
        let s = LogStep::new(vec![1.0, 9.0, 36.0], vec![1.0, 3.0], LogStepTail::Horizon).unwrap();
        assert_eq!(s.eval(-5.0), 1.0);
        assert_eq!(s.eval(9.0), 3.0);
        assert_eq!(s.eval(100.0), 3.0);
        let f = LogStep::new(vec![0.0, 1.0], vec![2.0], LogStepTail::Infinite).unwrap();
        assert_eq!(f.eval(1.0), f64::INFINITY);
        assert!(LogStep::new(vec![0.0, 1.0], vec![2.0], LogStepTail::Horizon).is_err());
    }
}
