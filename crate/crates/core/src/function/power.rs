use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `μ(x) = C·(x+s)^(-p)·(ln(x+s))^(-q)`.
///
/// The offset `s` defaults to `e`, which keeps the logarithm at least 1 on
/// `[0, ∞)`. An offset of 1 with `q = 0` gives the `(1+x)^(-p)` family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLog {
    pub scale: f64,
    pub p: f64,
    pub q: f64,
    pub shift: f64,
}

impl PowerLog {
    pub fn new(scale: f64, p: f64, q: f64) -> Self {
        Self { scale, p, q, shift: std::f64::consts::E }
    }

    pub fn validate(&self) -> Result<()> {
        let Self { scale, p, q, shift } = *self;
        let bad = |m: String| Err(Error::InvalidFunction(m));
        if !(scale.is_finite() && scale > 0.0) {
            return bad(format!("power_log scale must be positive, got {scale}"));
        }
        if !(p.is_finite() && p >= 0.0) || !q.is_finite() {
            return bad(format!("power_log exponents must be finite with p >= 0, got p={p}, q={q}"));
        }
        if !(shift.is_finite() && shift > 0.0) {
            return bad(format!("power_log offset must be positive, got {shift}"));
        }
        if q != 0.0 {
            if shift <= 1.0 {
                return bad(format!("power_log with q != 0 needs offset > 1, got {shift}"));
            }
            if p * shift.ln() + q < 0.0 {
                return bad(format!("power_log is not non-increasing: p·ln(s) + q = {}", p * shift.ln() + q));
            }
        }
        if p == 0.0 && q <= 0.0 {
            return Err(Error::NotInfinitesimal);
        }
        Ok(())
    }

    pub fn mu(&self, x: f64) -> f64 {
        let y = x + self.shift;
        let mut v = self.scale * y.powf(-self.p);
        if self.q != 0.0 {
            v *= y.ln().powf(-self.q);
        }
        v
    }

    /// `ln(e^t + s)`, accurate for large `t`.
    pub fn log_argument(&self, t: f64) -> f64 {
        if t > 0.0 {
            t + (self.shift * (-t).exp()).ln_1p()
        } else {
            (t.exp() + self.shift).ln()
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        let l = self.log_argument(t);
        let mut v = self.p * l - self.scale.ln();
        if self.q != 0.0 {
            v += self.q * l.ln();
        }
        v
    }

    pub fn integrable(&self) -> bool {
        self.p > 1.0 || (self.p == 1.0 && self.q > 1.0)
    }
}
