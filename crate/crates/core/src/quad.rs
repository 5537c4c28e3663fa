//! Adaptive Gauss-Kronrod quadrature, with log-scaled variants for integrands
//! that span many orders of magnitude.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae and weights, with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]` until the estimated error is
/// below `rel_tol` relative to the running total.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    // error estimates cannot drop below accumulated rounding
    let floor = |total: f64, n: usize| 50.0 * f64::EPSILON * total.abs() * (n as f64).sqrt();
    while total_err > rel_tol * total.abs() && total_err > floor(total, heap.len()) && total_err > f64::MIN_POSITIVE {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "{} intervals, error {total_err:e} on value {total:e}",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated cancellation in the running totals
    let (value, abs_error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    if !value.is_finite() {
        return Err(Error::Quadrature(format!("non-finite value {value}")));
    }
    Ok(Quadrature { value, abs_error, intervals: heap.len() })
}

/// Natural log of `∫_a^b exp(ln_f(u)) du` for a non-negative integrand given
/// through its logarithm. The integrand is rescaled by its sampled maximum.
pub fn ln_integrate<F: Fn(f64) -> f64>(ln_f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(f64::NEG_INFINITY);
    }
    let scale = sampled_max(&ln_f, a, b);
    if scale == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let q = integrate(|u| (ln_f(u) - scale).exp(), a, b, rel_tol)?;
    Ok(scale + q.value.ln())
}

/// Natural log of `∫_a^∞ exp(ln_f(u)) du`, integrating over successive intervals
/// of doubling width until the remaining contributions are negligible.
pub fn ln_integrate_to_infinity<F: Fn(f64) -> f64>(ln_f: F, a: f64, rel_tol: f64) -> Result<f64> {
    let mut acc = f64::NEG_INFINITY;
    let mut lo = a;
    let mut width = 1.0;
    let mut quiet = 0;
    for _ in 0..200 {
        let hi = lo + width;
        let piece = ln_integrate(&ln_f, lo, hi, rel_tol)?;
        acc = ln_add(acc, piece);
        if piece - acc < (rel_tol * 1e-3).ln() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Quadrature(format!("tail integral from {a} did not settle")))
}

fn sampled_max<F: Fn(f64) -> f64>(ln_f: &F, a: f64, b: f64) -> f64 {
    const SAMPLES: usize = 64;
    (0..=SAMPLES)
        .map(|i| ln_f(a + (b - a) * i as f64 / SAMPLES as f64))
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `ln(e^x + e^y)` without overflow.
pub fn ln_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^b - e^a)` for `a < b`.
pub fn ln_diff_exp(b: f64, a: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    b + (-(a - b).exp_m1()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12).unwrap();
        assert!((q.value - (20.0 - 8.0 + 4.0)).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_reaches_tolerance() {
        let q = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-11).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(((q.value - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn log_scaled_tail_matches_closed_form() {
        // ∫_t^∞ e^{-3u} du = e^{-3t}/3, evaluated where e^{-3t} underflows
        let t = 400.0;
        let ln = ln_integrate_to_infinity(|u| -3.0 * u, t, 1e-12).unwrap();
        assert!((ln - (-3.0 * t - 3f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn ln_helpers() {
        assert!((ln_add(1.0, 2.0) - (1f64.exp() + 2f64.exp()).ln()).abs() < 1e-15);
        assert_eq!(ln_add(f64::NEG_INFINITY, 3.0), 3.0);
        assert!((ln_diff_exp(2.0, 1.0) - (2f64.exp() - 1f64.exp()).ln()).abs() < 1e-14);
    }
}
