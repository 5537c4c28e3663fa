use serde::{Deserialize, Serialize};

use super::step::Step;
use super::{EigenvalueFunction, Profile};
use crate::error::{Error, Result};

/// Finite spectral data of `|A|`: each pair is a spectral value together with
/// the trace of its spectral projection. Weights need not be integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pairs: Vec<(f64, f64)>,
}

impl SpectralData {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for (index, &(value, weight)) in pairs.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NegativeValue { index, value });
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::NonpositiveWeight { index, weight });
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn total_weight(&self) -> f64 {
        self.pairs.iter().map(|p| p.1).sum()
    }

    pub fn distribution(&self) -> DistributionFunction<'_> {
        DistributionFunction { data: self }
    }
}

/// `λ(s)`: total weight of spectral values strictly above `s`.
#[derive(Clone, Copy, Debug)]
pub struct DistributionFunction<'a> {
    data: &'a SpectralData,
}

impl DistributionFunction<'_> {
    pub fn eval(&self, s: f64) -> f64 {
        self.data.pairs.iter().filter(|p| p.0 > s).map(|p| p.1).sum()
    }
}

/// Non-increasing rearrangement of finite spectral data.
///
/// Values are sorted in decreasing order, each occupying an interval as long as
/// its weight; equal values merge and zero values drop out. The result equals
/// `inf{s ≥ 0 : λ(s) ≤ t}` pointwise. Empty data gives the zero function.
pub fn rearrange(data: &SpectralData) -> EigenvalueFunction {
    let mut pairs: Vec<(f64, f64)> = data.pairs.iter().copied().filter(|p| p.0 > 0.0).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut breakpoints = vec![0.0];
    let mut values: Vec<f64> = Vec::new();
    let mut end = 0.0;
    for (value, weight) in pairs {
        end += weight;
        if values.last() == Some(&value) {
            *breakpoints.last_mut().expect("non-empty") = end;
        } else {
            values.push(value);
            breakpoints.push(end);
        }
    }
    let step = Step::new(breakpoints, values).expect("sorted rearrangement is a valid step function");
    EigenvalueFunction::from_valid(Profile::Step(step))
}
