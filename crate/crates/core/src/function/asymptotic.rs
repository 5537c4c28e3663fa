use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Asymptotic expansion of a g-function,
/// `g(t) = exp_rate·e^t + slope·t + log_coef·ln t + constant + o(1)` as `t → ∞`.
///
/// Two expansions compare lexicographically, and a strict difference decides the
/// eventual order of the underlying functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub exp_rate: f64,
    pub slope: f64,
    pub log_coef: f64,
    pub constant: f64,
}

impl Expansion {
    pub fn power_log(scale: f64, p: f64, q: f64) -> Self {
        Self { exp_rate: 0.0, slope: p, log_coef: q, constant: -scale.ln() }
    }

    /// Expansion of `b + g(t - a)`.
    pub fn shifted(&self, a: f64, b: f64) -> Self {
        Self {
            exp_rate: self.exp_rate * (-a).exp(),
            slope: self.slope,
            log_coef: self.log_coef,
            constant: self.constant + b - self.slope * a,
        }
    }

    /// Asymptotic growth rate of `g(t)/t`, which is `1/δ` for the common
    /// Matuszewska index δ. Infinite for exponential growth.
    pub fn rate(&self) -> f64 {
        if self.exp_rate > 0.0 {
            f64::INFINITY
        } else {
            self.slope
        }
    }

    /// Ordering of everything but the constant term.
    pub fn growth_cmp(&self, other: &Self) -> Ordering {
        self.exp_rate
            .total_cmp(&other.exp_rate)
            .then(self.slope.total_cmp(&other.slope))
            .then(self.log_coef.total_cmp(&other.log_coef))
    }

    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.growth_cmp(other).then(self.constant.total_cmp(&other.constant))
    }

    pub fn lex_min(self, other: Self) -> Self {
        if self.lex_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Whether `∫ e^{-g(ln x)} dx` converges at infinity.
    pub fn integrable(&self) -> bool {
        self.exp_rate > 0.0 || self.slope > 1.0 || (self.slope == 1.0 && self.log_coef > 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_moves_constant_by_slope() {
        let e = Expansion::power_log(1.0, 2.0, 0.0).shifted(1.0, 3.0);
        assert_eq!(e.slope, 2.0);
        assert_eq!(e.constant, 1.0);
    }

    #[test]
    fn lexicographic_order() {
        let a = Expansion::power_log(1.0, 1.0, 2.0);
        let b = Expansion::power_log(1.0, 1.0, 0.0);
        assert_eq!(a.lex_cmp(&b), Ordering::Greater);
        assert_eq!(a.lex_min(b), b);
        assert!(a.integrable());
        assert!(!b.integrable());
    }
}
