//! Browser bindings. Each exported function takes plain arguments and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use singtrace::classify::{classify, ClassifyConfig};
use singtrace::cli::FamilySpec;
use singtrace::construct::{construct, verify_construction, Variant, VerifyConfig, DEFAULT_START};
use singtrace::function::g_transform;
use singtrace::indices::{matuszewska, EstimatorConfig};
use singtrace::{EigenvalueFunction, GFunction};

const CURVE_POINTS: usize = 240;

fn parse_family(spec: &str) -> Result<EigenvalueFunction, String> {
    let spec: FamilySpec = serde_json::from_str(spec).map_err(|e| e.to_string())?;
    spec.to_function().map_err(|e| e.to_string())
}

/// Samples of `g` on `[lo, hi]`, skipping infinite values.
fn curve(g: &GFunction, lo: f64, hi: f64) -> Vec<[f64; 2]> {
    (0..CURVE_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64)
        .map(|t| [t, g.eval(t)])
        .filter(|p| p[1].is_finite())
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Classification report plus samples of `g` for plotting.
pub fn classify_value(spec: &str) -> Result<Value, String> {
    let mu = parse_family(spec)?;
    let report = classify(&mu, &ClassifyConfig::default()).map_err(|e| e.to_string())?;
    let hi = mu.horizon().unwrap_or(20.0).min(20.0);
    Ok(json!({
        "report": to_value(&report)?,
        "curve": curve(&g_transform(&mu), -2.0, hi),
    }))
}

/// Staircase for `g_A(t) = intercept + slope·max(t, 0)` with its verification
/// and the transformed source the steps are compared against.
pub fn staircase_value(variant: &str, slope: f64, intercept: f64, n_steps: u32) -> Result<Value, String> {
    let variant = match variant {
        "vanisher" => Variant::Vanisher,
        "dominator" => Variant::Dominator,
        other => return Err(format!("unknown variant `{other}`")),
    };
    let source = GFunction::linear(slope, intercept).map_err(|e| e.to_string())?;
    let s = construct(&source, variant, n_steps as usize, DEFAULT_START).map_err(|e| e.to_string())?;
    let verification = match verify_construction(&s, &VerifyConfig::default()) {
        Ok(v) => to_value(&v)?,
        Err(e) => json!({ "error": e.to_string() }),
    };
    let end = s.breakpoints[s.breakpoints.len() - 1];
    let bound: Vec<[f64; 2]> = (0..CURVE_POINTS)
        .map(|i| DEFAULT_START + (end - DEFAULT_START) * i as f64 / (CURVE_POINTS - 1) as f64)
        .map(|t| {
            let g = source.eval(t) + s.offset;
            [t, if variant == Variant::Vanisher { g.sqrt() } else { g * g }]
        })
        .collect();
    Ok(json!({
        "construction": to_value(&s)?,
        "verification": verification,
        "bound": bound,
    }))
}

/// Matuszewska indices with the per-h quotient table.
pub fn index_table_value(spec: &str, force_estimate: bool) -> Result<Value, String> {
    let mu = parse_family(spec)?;
    let cfg = EstimatorConfig { force_estimate, ..Default::default() };
    let report = matuszewska(&mu, &cfg).map_err(|e| e.to_string())?;
    to_value(&report)
}

#[wasm_bindgen]
pub fn classify_json(spec: &str) -> String {
    respond(classify_value(spec))
}

#[wasm_bindgen]
pub fn staircase_json(variant: &str, slope: f64, intercept: f64, n_steps: u32) -> String {
    respond(staircase_value(variant, slope, intercept, n_steps))
}

#[wasm_bindgen]
pub fn index_table_json(spec: &str, force_estimate: bool) -> String {
    respond(index_table_value(spec, force_estimate))
}
