//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the logic is
//! testable natively; errors cross the boundary as JS exceptions.

use causal_game::{
    optimal_dt, simulate_game, success_probability, violation_threshold_sigma, GameConfig,
    OptimumReport, ThresholdResult,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request in one call.
pub const MAX_POINTS: usize = 10_000;
/// Largest Monte Carlo run the page may request in one call.
pub const MAX_ROUNDS: u32 = 10_000_000;

fn config(sigma_a: f64, sigma_b: f64, tau: f64, dt: f64) -> Result<GameConfig, String> {
    let c = GameConfig::new(sigma_a, sigma_b, tau, dt);
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

/// Success probability on `n` evenly spaced offsets in `[dt_min, dt_max]`.
pub fn p_succ_curve(
    sigma_a: f64,
    sigma_b: f64,
    tau: f64,
    dt_min: f64,
    dt_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("need 2..={MAX_POINTS} points, got {n}"));
    }
    if !(dt_min.is_finite() && dt_max.is_finite() && dt_min < dt_max) {
        return Err("dt range must be finite with dt_min < dt_max".into());
    }
    let step = (dt_max - dt_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let dt = if i + 1 == n { dt_max } else { dt_min + step * i as f64 };
            success_probability(&config(sigma_a, sigma_b, tau, dt)?)
                .map(|s| s.p_succ)
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Optimum {
    #[serde(flatten)]
    pub report: OptimumReport,
    pub threshold: ThresholdResult,
}

/// Optimal offset for equal widths plus the violation threshold at `dt = 0`.
pub fn optimum_report(sigma: f64, tau: f64) -> Result<Optimum, String> {
    Ok(Optimum {
        report: optimal_dt(sigma, tau).map_err(|e| e.to_string())?,
        threshold: violation_threshold_sigma(tau, 0.0).map_err(|e| e.to_string())?,
    })
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = pSuccCurve)]
pub fn p_succ_curve_js(
    sigma_a: f64,
    sigma_b: f64,
    tau: f64,
    dt_min: f64,
    dt_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    p_succ_curve(sigma_a, sigma_b, tau, dt_min, dt_max, n).map_err(|e| JsError::new(&e))
}

/// JSON with `dt_star`, `p_succ_star`, `regime`, `bifurcation_sigma_tau`, `threshold`.
#[wasm_bindgen(js_name = optimum)]
pub fn optimum_js(sigma: f64, tau: f64) -> Result<String, JsError> {
    to_js(optimum_report(sigma, tau))
}

/// JSON Monte Carlo report; `rounds` is capped at [`MAX_ROUNDS`].
#[wasm_bindgen(js_name = monteCarlo)]
pub fn monte_carlo_js(
    sigma_a: f64,
    sigma_b: f64,
    tau: f64,
    dt: f64,
    rounds: u32,
    seed: u32,
) -> Result<String, JsError> {
    to_js(monte_carlo(sigma_a, sigma_b, tau, dt, rounds, seed))
}

pub fn monte_carlo(
    sigma_a: f64,
    sigma_b: f64,
    tau: f64,
    dt: f64,
    rounds: u32,
    seed: u32,
) -> Result<causal_game::MonteCarloReport, String> {
    if rounds > MAX_ROUNDS {
        return Err(format!("at most {MAX_ROUNDS} rounds per call"));
    }
    simulate_game(&config(sigma_a, sigma_b, tau, dt)?, u64::from(rounds), u64::from(seed))
        .map_err(|e| e.to_string())
}
