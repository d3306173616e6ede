//! Timing optimisation for the equal-width game.
//!
//! With equal widths the success probability is `¼[2 + f(Δt)]` where
//!
//! ```text
//! f(Δt) = exp(-(Δt - τ)²σ²) + exp(-(Δt + τ)²σ²)
//! ```
//!
//! is an even mixture of two Gaussians. It is unimodal with its peak at
//! `Δt = 0` iff `στ ≤ 1/√2` and otherwise has a symmetric pair of maxima in
//! `0 < |Δt| < τ` that drift towards `±τ` as `στ` grows.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{success_probability, violates_bound, GameConfig};

/// Points in the coarse grid on `[0, 2τ]`.
pub const COARSE_GRID: usize = 4096;

/// Relative resolution of the refined optimum, in units of τ.
pub const DT_RESOLUTION: f64 = 1e-12;

/// Fraction of τ from which the optimum counts as light-like (regime A).
pub const LIGHT_LIKE_FRACTION: f64 = 0.95;

/// στ at which the stationary point Δt = 0 turns from maximum to minimum.
pub const BIFURCATION_SIGMA_TAU: f64 = FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Optimum at `Δt ≈ ±τ`: the photons travel on light-like lines.
    A,
    /// Optimum strictly between 0 and τ.
    B,
    /// Optimum at `Δt = 0`: both labs act at the same time.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    /// Nonnegative member of the `±Δt*` pair.
    pub dt_star: f64,
    pub p_succ_star: f64,
    pub regime: Regime,
    pub bifurcation_sigma_tau: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
    }
}

fn overlap_sum(sigma: f64, tau: f64, dt: f64) -> f64 {
    let m = (dt - tau) * sigma;
    let p = (dt + tau) * sigma;
    (-m * m).exp() + (-p * p).exp()
}

/// Derivative of [`overlap_sum`] in Δt, up to the positive factor 2σ².
fn overlap_slope(sigma: f64, tau: f64, dt: f64) -> f64 {
    let m = (dt - tau) * sigma;
    let p = (dt + tau) * sigma;
    -((dt - tau) * (-m * m).exp() + (dt + tau) * (-p * p).exp())
}

/// Maximises the equal-width success probability over the timing offset.
///
/// A coarse grid on `[0, 2τ]` brackets the peak; the bracket is then
/// bisected on the sign of the slope down to `1e-12·τ`. Δt = 0 is always
/// stationary by evenness and is kept (including the flat tie at the
/// bifurcation) unless an interior peak is strictly higher.
pub fn optimal_dt(sigma: f64, tau: f64) -> Result<OptimumReport> {
    check_positive("sigma", sigma)?;
    check_positive("tau", tau)?;

    let step = 2.0 * tau / (COARSE_GRID - 1) as f64;
    let f = |dt: f64| overlap_sum(sigma, tau, dt);
    let best = (0..COARSE_GRID)
        .map(|i| (i, f(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
        .0;

    // Δt = 0 is a local maximum iff the curvature there is ≤ 0, i.e.
    // 2σ²τ² ≤ 1. In that case the mixture is unimodal.
    let st = sigma * tau;
    let centre_is_peak = 2.0 * st * st <= 1.0;

    let mut dt_star = 0.0;
    if !centre_is_peak {
        let mut lo = best.saturating_sub(1) as f64 * step;
        let mut hi = ((best + 1).min(COARSE_GRID - 1)) as f64 * step;
        // The slope is positive just right of 0 when the centre is a minimum.
        if best > 0 && overlap_slope(sigma, tau, lo) <= 0.0 {
            lo = 0.0;
        }
        if overlap_slope(sigma, tau, hi) >= 0.0 {
            hi = 2.0 * tau;
        }
        let resolution = DT_RESOLUTION * tau;
        while hi - lo > resolution {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if overlap_slope(sigma, tau, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let candidate = 0.5 * (lo + hi);
        // Right at the bifurcation both values agree to rounding; keep 0.
        let centre = f(0.0);
        if f(candidate) - centre > 4.0 * f64::EPSILON * centre {
            dt_star = candidate;
        }
    }

    let p_succ_star = success_probability(&GameConfig::symmetric(sigma, tau, dt_star))?.p_succ;
    Ok(OptimumReport {
        dt_star,
        p_succ_star,
        regime: classify(dt_star, tau),
        bifurcation_sigma_tau: BIFURCATION_SIGMA_TAU,
    })
}

pub fn classify(dt_star: f64, tau: f64) -> Regime {
    if dt_star == 0.0 {
        Regime::C
    } else if dt_star >= LIGHT_LIKE_FRACTION * tau {
        Regime::A
    } else {
        Regime::B
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Largest σ in the bracket with `P_succ ≥ 3/4`.
    pub sigma: f64,
    /// The whole bracket `(0, 20/τ]` violates; `sigma` is the bracket top.
    pub always_violates: bool,
}

/// Upper end of the σ bracket, in units of 1/τ.
pub const THRESHOLD_BRACKET: f64 = 20.0;

/// Largest equal width σ with `P_succ(σ, τ, Δt) ≥ 3/4`.
///
/// `P_succ` is decreasing in σ at fixed (τ, Δt), so the crossing is found by
/// bisection on `(0, 20/τ]` to relative tolerance 1e-10.
pub fn violation_threshold_sigma(tau: f64, dt: f64) -> Result<ThresholdResult> {
    check_positive("tau", tau)?;
    if !dt.is_finite() {
        return Err(Error::InvalidConfig(format!("dt must be finite, got {dt}")));
    }
    let at_least_bound =
        |sigma: f64| -> Result<bool> {
            Ok(success_probability(&GameConfig::symmetric(sigma, tau, dt))?.p_succ >= 0.75)
        };

    let top = THRESHOLD_BRACKET / tau;
    if at_least_bound(top)? {
        return Ok(ThresholdResult { sigma: top, always_violates: true });
    }
    let mut lo = top * 1e-12;
    if !at_least_bound(lo)? {
        return Err(Error::NoViolation);
    }
    let mut hi = top;
    while hi - lo > 1e-10 * lo {
        let mid = 0.5 * (lo + hi);
        if at_least_bound(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult { sigma: lo, always_violates: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub tau: f64,
    pub dt: f64,
    pub p_ab: f64,
    pub p_ba: f64,
    pub p_succ: f64,
    pub violates: bool,
}

fn sweep_row(sigma: f64, tau: f64, dt: f64) -> Result<SweepRow> {
    let config = GameConfig::symmetric(sigma, tau, dt);
    let s = success_probability(&config)?;
    Ok(SweepRow {
        sigma_a: sigma,
        sigma_b: sigma,
        tau,
        dt,
        p_ab: s.p_transmit_ab,
        p_ba: s.p_transmit_ba,
        p_succ: s.p_succ,
        violates: violates_bound(s.p_succ),
    })
}

/// Equal-width success probabilities on a `sigma × dt` grid, sigma-major.
pub fn sweep(sigma_list: &[f64], tau: f64, dt_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if sigma_list.is_empty() || dt_grid.is_empty() {
        return Err(Error::InvalidConfig("sweep grids must be nonempty".into()));
    }
    let cells: Vec<(f64, f64)> = sigma_list
        .iter()
        .flat_map(|&s| dt_grid.iter().map(move |&dt| (s, dt)))
        .collect();

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(|&(s, dt)| sweep_row(s, tau, dt)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(|&(s, dt)| sweep_row(s, tau, dt)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_band_optimum_is_simultaneous() {
        let r = optimal_dt(0.5, 1.0).unwrap();
        assert_eq!(r.dt_star, 0.0);
        assert_eq!(r.regime, Regime::C);
        assert!((r.p_succ_star - 0.5 * (1.0 + (-0.25f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn bifurcation_point_resolves_to_zero() {
        let r = optimal_dt(FRAC_1_SQRT_2, 1.0).unwrap();
        assert_eq!(r.dt_star, 0.0);
        assert_eq!(r.regime, Regime::C);
        let r = optimal_dt(1.0, FRAC_1_SQRT_2).unwrap();
        assert_eq!(r.dt_star, 0.0);
    }

    #[test]
    fn wide_band_optimum_is_light_like() {
        let r = optimal_dt(2.0, 1.0).unwrap();
        assert!((r.dt_star - 1.0).abs() < 0.05);
        assert_eq!(r.regime, Regime::A);
    }

    #[test]
    fn intermediate_regime() {
        let r = optimal_dt(0.9, 1.0).unwrap();
        assert!(r.dt_star > 0.0 && r.dt_star < 0.95);
        assert_eq!(r.regime, Regime::B);
        // stationary
        assert!(overlap_slope(0.9, 1.0, r.dt_star).abs() < 1e-10);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(matches!(optimal_dt(0.0, 1.0), Err(Error::InvalidConfig(_))));
        assert!(matches!(optimal_dt(1.0, -2.0), Err(Error::InvalidConfig(_))));
        assert!(matches!(violation_threshold_sigma(0.0, 0.0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn symmetric_threshold_is_sqrt_ln2() {
        let r = violation_threshold_sigma(1.0, 0.0).unwrap();
        assert!(!r.always_violates);
        assert!((r.sigma - 2f64.ln().sqrt()).abs() < 1e-9);
        let r = violation_threshold_sigma(2.0, 0.0).unwrap();
        assert!((r.sigma - 0.416_277_3).abs() < 1e-6);
    }

    #[test]
    fn light_like_offset_always_violates() {
        let r = violation_threshold_sigma(1.0, 1.0).unwrap();
        assert!(r.always_violates);
        assert_eq!(r.sigma, 20.0);
    }

    #[test]
    fn sweep_single_cell() {
        let rows = sweep(&[0.5], 1.0, &[0.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].p_succ - 0.889_400_391_535_702).abs() < 1e-12);
        assert!(rows[0].violates);
    }

    #[test]
    fn sweep_order_is_sigma_major() {
        let rows = sweep(&[0.5, 1.0], 1.0, &[-1.0, 0.0, 1.0]).unwrap();
        let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.sigma_a, r.dt)).collect();
        assert_eq!(
            keys,
            vec![(0.5, -1.0), (0.5, 0.0), (0.5, 1.0), (1.0, -1.0), (1.0, 0.0), (1.0, 1.0)]
        );
    }

    #[test]
    fn empty_sweep_rejected() {
        assert!(sweep(&[], 1.0, &[0.0]).is_err());
        assert!(sweep(&[1.0], 1.0, &[]).is_err());
    }
}
