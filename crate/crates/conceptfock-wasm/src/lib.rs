//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain numbers and tokens, does one library
//! operation, and returns a JSON string: `{"error": "..."}` on failure,
//! the result object otherwise. Keeping the boundary stringly-typed avoids
//! pulling a serializer bridge into the wasm module and keeps every binding
//! trivially testable on the host target.

use conceptfock::{
    classify, eval, fit_theta, representable_interval, simulate, CombinationKind, FitError,
    MembershipRecord, ModelParams, ModelVariant, SimulationConfig,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse_kind(token: &str) -> Result<CombinationKind, String> {
    CombinationKind::parse_token(token).ok_or_else(|| format!("unknown kind '{token}'"))
}

fn parse_variant(token: &str) -> Result<ModelVariant, String> {
    ModelVariant::parse_token(token).ok_or_else(|| format!("unknown variant '{token}'"))
}

fn render(result: Result<serde_json::Value, String>) -> String {
    match result {
        Ok(value) => value.to_string(),
        Err(message) => json!({ "error": message }).to_string(),
    }
}

/// Classical-representability diagnostics for one weight triple.
#[wasm_bindgen]
pub fn classify_json(mu_a: f64, mu_b: f64, mu_comb: f64, kind: &str) -> String {
    render((|| {
        let kind = parse_kind(kind)?;
        let record = MembershipRecord::new("demo", "A", "B", mu_a, mu_b, mu_comb, kind)
            .map_err(|e| e.to_string())?;
        let report = classify(&record);
        serde_json::to_value(&report).map_err(|e| e.to_string())
    })())
}

/// Model value as a function of the interference angle at fixed weights,
/// with the reachable interval and the angle fit against a target.
#[wasm_bindgen]
pub fn model_curve_json(
    mu_a: f64,
    mu_b: f64,
    m_sq: f64,
    mu_target: f64,
    kind: &str,
    variant: &str,
    samples: u32,
) -> String {
    render((|| {
        let kind = parse_kind(kind)?;
        let variant = parse_variant(variant)?;
        let samples = samples.clamp(2, 2048);
        let mut curve = Vec::with_capacity(samples as usize + 1);
        for step in 0..=samples {
            let theta = 180.0 * step as f64 / samples as f64;
            let params =
                ModelParams::new(m_sq, theta, kind, variant).map_err(|e| e.to_string())?;
            let value = eval(mu_a, mu_b, &params).map_err(|e| e.to_string())?;
            curve.push(json!([theta, value.value]));
        }
        let (lo, hi) = representable_interval(mu_a, mu_b, kind, variant)
            .map_err(|e| e.to_string())?;
        let fit = match fit_theta(mu_a, mu_b, mu_target, m_sq, kind, variant) {
            Ok(theta_deg) => json!({ "status": "ok", "theta_deg": theta_deg }),
            Err(e @ FitError::Domain(_)) => return Err(e.to_string()),
            Err(e) => json!({ "status": "infeasible", "error": e.to_string() }),
        };
        Ok(json!({
            "curve": curve,
            "interval": [lo, hi],
            "target": mu_target,
            "fit": fit,
        }))
    })())
}

/// Seeded synthetic judgments at explicit parameters; empirical rates plus
/// the analytic rate they estimate.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)] // flat scalars keep the JS call site plain
pub fn simulate_json(
    mu_a: f64,
    mu_b: f64,
    mu_comb: f64,
    m_sq: f64,
    theta_deg: f64,
    kind: &str,
    variant: &str,
    trials: u32,
    seed: u32,
) -> String {
    render((|| {
        let kind = parse_kind(kind)?;
        let variant = parse_variant(variant)?;
        let record = MembershipRecord::new("demo", "A", "B", mu_a, mu_b, mu_comb, kind)
            .map_err(|e| e.to_string())?;
        let params =
            ModelParams::new(m_sq, theta_deg, kind, variant).map_err(|e| e.to_string())?;
        let analytic = eval(mu_a, mu_b, &params).map_err(|e| e.to_string())?;
        let result = simulate(&SimulationConfig {
            trials: trials.max(1) as u64,
            seed: seed as u64,
            record,
            params,
        })
        .map_err(|e| e.to_string())?;
        Ok(json!({
            "analytic": analytic.value,
            "empirical_mu_a": result.empirical_mu_a,
            "empirical_mu_b": result.empirical_mu_b,
            "empirical_mu_comb": result.empirical_mu_comb,
            "trials": result.trials,
            "refit_theta_deg": result.refit.map(|p| p.theta_deg()),
        }))
    })())
}
