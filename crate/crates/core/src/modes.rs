//! Gaussian-localised single-photon modes.
//!
//! A mode is a right-moving wavepacket with Gaussian spectral amplitude
//!
//! ```text
//! φ(k) = exp(-(k - k0)² / 4σ²) / (2πσ²)^{1/4}
//! ```
//!
//! peaked on the light-like line `t - x = t_center - x_center`. Units have
//! `c = ħ = 1` and the dispersion is `ω_k = k`.
//!
//! The probability that a photon prepared in one mode passes a mode-selective
//! mirror matched to another is the squared overlap of the two mode
//! functions. For equal carriers the overlap has a closed form which depends
//! only on the widths and on the delay argument
//! `(t_recv - t_send) - (x_recv - x_send)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Spectral half-window, in units of the widest σ, used by the quadrature
/// routines. The Gaussian tail beyond it is below 1e-30.
pub const WINDOW_SIGMAS: f64 = 12.0;

/// Minimum k0/σ for which the 1+1-D right-moving description is trusted.
pub const PARAXIAL_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    /// Encodes a classical bit: 0 ↦ H, 1 ↦ V.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarization::V
        } else {
            Polarization::H
        }
    }

    pub fn bit(self) -> bool {
        matches!(self, Polarization::V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMode {
    /// Central wavenumber.
    pub k0: f64,
    /// Spectral width σ; the temporal width is 1/σ.
    pub sigma: f64,
    pub t_center: f64,
    pub x_center: f64,
    pub polarization: Polarization,
}

impl GaussianMode {
    /// H-polarised mode centred on `(t_center, x_center)`.
    pub fn new(k0: f64, sigma: f64, t_center: f64, x_center: f64) -> Result<Self> {
        let mode = GaussianMode { k0, sigma, t_center, x_center, polarization: Polarization::H };
        mode.validate()?;
        Ok(mode)
    }

    pub fn with_polarization(mut self, polarization: Polarization) -> Self {
        self.polarization = polarization;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_width()?;
        if !(self.k0.is_finite() && self.k0 > 0.0) {
            return Err(Error::InvalidMode(format!("k0 must be positive, got {}", self.k0)));
        }
        if !self.t_center.is_finite() || !self.x_center.is_finite() {
            return Err(Error::InvalidMode("mode centre must be finite".into()));
        }
        Ok(())
    }

    fn validate_width(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidMode(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    /// True when k0/σ is large enough that the mode has no left-moving part.
    pub fn paraxial_ok(&self) -> bool {
        self.k0 / self.sigma >= PARAXIAL_RATIO
    }

    /// Position of the mode along its light-like trajectory, `t - x`.
    pub fn light_cone_coordinate(&self) -> f64 {
        self.t_center - self.x_center
    }

    /// Delay argument seen by a receiver: `(t_r - t_s) - (x_r - x_s)`.
    pub fn delay_to(&self, receiver: &GaussianMode) -> f64 {
        (receiver.t_center - self.t_center) - (receiver.x_center - self.x_center)
    }

    /// Real spectral amplitude φ(k), normalised so that ∫ φ² dk = 1.
    pub fn spectral_amplitude(&self, k: f64) -> f64 {
        let z = k - self.k0;
        (-(z * z) / (4.0 * self.sigma * self.sigma)).exp()
            / (2.0 * PI * self.sigma * self.sigma).powf(0.25)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapMethod {
    Analytic,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult {
    pub probability: f64,
    /// `1 - probability`, evaluated without cancellation on the analytic path.
    pub complement: f64,
    pub method: OverlapMethod,
    /// Set when either mode fails the paraxial check.
    pub warning: Option<String>,
}

fn paraxial_warning(sender: &GaussianMode, receiver: &GaussianMode) -> Option<String> {
    let bad: Vec<&str> = [(sender, "sender"), (receiver, "receiver")]
        .into_iter()
        .filter(|(m, _)| !m.paraxial_ok())
        .map(|(_, name)| name)
        .collect();
    if bad.is_empty() {
        None
    } else {
        Some(format!(
            "k0/sigma below {PARAXIAL_RATIO} for {}; right-moving approximation is poor",
            bad.join(" and ")
        ))
    }
}

/// Closed-form probability for `sender`'s photon to pass the mirror matched to
/// `receiver`.
///
/// With widths σ_s, σ_r and delay argument d the result is
/// `2σ_sσ_r/(σ_s²+σ_r²) · exp(-2σ_s²σ_r² d²/(σ_s²+σ_r²))`, which reduces to
/// `exp(-σ²d²)` for equal widths. Polarisation does not enter.
pub fn transmission_probability(
    sender: &GaussianMode,
    receiver: &GaussianMode,
) -> Result<OverlapResult> {
    sender.validate()?;
    receiver.validate()?;
    let scale = sender.k0.abs().max(receiver.k0.abs());
    if (sender.k0 - receiver.k0).abs() > 1e-12 * scale {
        return Err(Error::MismatchedCarrier { sender: sender.k0, receiver: receiver.k0 });
    }

    let d = sender.delay_to(receiver);
    let (sa, sb) = (sender.sigma, receiver.sigma);
    let (probability, complement) = if sa == sb {
        let arg = sa * d;
        ((-arg * arg).exp(), -(-arg * arg).exp_m1())
    } else {
        let (sa2, sb2) = (sa * sa, sb * sb);
        let sum = sa2 + sb2;
        let peak = 2.0 * sa * sb / sum;
        let exponent = -2.0 * sa2 * sb2 * d * d / sum;
        // 1 - peak·e^x = (σ_s - σ_r)²/(σ_s² + σ_r²) + peak·(1 - e^x)
        let miss = (sa - sb) * (sa - sb) / sum - peak * exponent.exp_m1();
        (peak * exponent.exp(), miss)
    };

    Ok(OverlapResult {
        probability: probability.clamp(0.0, 1.0),
        complement: complement.clamp(0.0, 1.0),
        method: OverlapMethod::Analytic,
        warning: paraxial_warning(sender, receiver),
    })
}

/// Squared overlap `|⟨0|a_recv a†_send|0⟩|²` by adaptive quadrature of the
/// spectral integral. Handles unequal carriers.
pub fn overlap_probability_quadrature(
    sender: &GaussianMode,
    receiver: &GaussianMode,
    tol: f64,
) -> Result<OverlapResult> {
    sender.validate()?;
    receiver.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
    }

    let widest = sender.sigma.max(receiver.sigma);
    let lo = sender.k0.min(receiver.k0) - WINDOW_SIGMAS * widest;
    let hi = sender.k0.max(receiver.k0) + WINDOW_SIGMAS * widest;
    let d = sender.delay_to(receiver);
    // A global phase exp(-i k_mid d) is factored out; it drops from |·|².
    let k_mid = 0.5 * (lo + hi);

    let integrand = |k: f64| {
        let weight = sender.spectral_amplitude(k) * receiver.spectral_amplitude(k);
        Complex64::from_polar(weight, -(k - k_mid) * d)
    };
    // |A|² - |Â|² ≈ 2|A|·|A - Â| ≤ 2 tol_amp, so a third of tol leaves slack.
    let amplitude: Complex64 = quadrature::integrate(integrand, lo, hi, tol / 3.0)?;

    let probability = amplitude.norm_sqr().clamp(0.0, 1.0);
    Ok(OverlapResult {
        probability,
        complement: 1.0 - probability,
        method: OverlapMethod::Quadrature,
        warning: paraxial_warning(sender, receiver),
    })
}

/// Energy expectation of the single-photon state in `mode`,
/// `∫ dk |k| exp(-(k-k0)²/2σ²) / (2πσ)`.
///
/// Only σ > 0 is required here; `k0 = 0` is allowed so the strongly
/// non-paraxial limit can be evaluated.
pub fn energy_expectation(mode: &GaussianMode, tol: f64) -> Result<f64> {
    mode.validate_width()?;
    if !mode.k0.is_finite() {
        return Err(Error::InvalidMode(format!("k0 must be finite, got {}", mode.k0)));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
    }

    let (k0, sigma) = (mode.k0, mode.sigma);
    let integrand = |k: f64| {
        let z = k - k0;
        k.abs() * (-(z * z) / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma)
    };
    let lo = k0 - WINDOW_SIGMAS * sigma;
    let hi = k0 + WINDOW_SIGMAS * sigma;

    // Split at the kink of |k| when it falls inside the window.
    if lo < 0.0 && hi > 0.0 {
        let left = quadrature::integrate(integrand, lo, 0.0, 0.5 * tol)?;
        let right = quadrature::integrate(integrand, 0.0, hi, 0.5 * tol)?;
        Ok(left + right)
    } else {
        quadrature::integrate(integrand, lo, hi, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(k0: f64, sigma: f64, t: f64, x: f64) -> GaussianMode {
        GaussianMode::new(k0, sigma, t, x).unwrap()
    }

    #[test]
    fn zero_delay_is_full_transmission() {
        let tau = 2.5;
        let a = mode(100.0, 1.0, 0.0, 0.0);
        let b = mode(100.0, 1.0, tau, tau);
        let r = transmission_probability(&a, &b).unwrap();
        assert_eq!(r.probability, 1.0);
        assert_eq!(r.method, OverlapMethod::Analytic);
        assert!(r.warning.is_none());
    }

    #[test]
    fn unit_sigma_tau_gives_inverse_e() {
        let a = mode(100.0, 1.0, 0.0, 0.0);
        let b = mode(100.0, 1.0, 0.0, 1.0);
        let p = transmission_probability(&a, &b).unwrap().probability;
        assert!((p - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn mismatched_width_peak() {
        let a = mode(100.0, 1.0, 0.0, 0.0);
        let b = mode(100.0, 3.0, 0.0, 0.0);
        let p = transmission_probability(&a, &b).unwrap().probability;
        assert!((p - 0.6).abs() < 1e-15);
    }

    #[test]
    fn mismatched_carrier_rejected_on_analytic_path() {
        let a = mode(100.0, 1.0, 0.0, 0.0);
        let b = mode(103.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            transmission_probability(&a, &b),
            Err(Error::MismatchedCarrier { .. })
        ));
        assert!(overlap_probability_quadrature(&a, &b, 1e-9).is_ok());
    }

    #[test]
    fn invalid_sigma_rejected() {
        assert!(matches!(GaussianMode::new(100.0, 0.0, 0.0, 0.0), Err(Error::InvalidMode(_))));
        let bad = GaussianMode {
            k0: 100.0,
            sigma: -1.0,
            t_center: 0.0,
            x_center: 0.0,
            polarization: Polarization::H,
        };
        let good = mode(100.0, 1.0, 0.0, 0.0);
        assert!(matches!(transmission_probability(&bad, &good), Err(Error::InvalidMode(_))));
        assert!(matches!(energy_expectation(&bad, 1e-9), Err(Error::InvalidMode(_))));
    }

    #[test]
    fn paraxial_warning_is_not_an_error() {
        let a = mode(5.0, 1.0, 0.0, 0.0);
        let b = mode(5.0, 1.0, 0.0, 0.0);
        let r = transmission_probability(&a, &b).unwrap();
        assert_eq!(r.probability, 1.0);
        assert!(r.warning.unwrap().contains("sender and receiver"));
    }

    #[test]
    fn quadrature_self_overlap_is_one() {
        let a = mode(100.0, 1.0, 0.3, -0.2);
        let r = overlap_probability_quadrature(&a, &a, 1e-10).unwrap();
        assert!((r.probability - 1.0).abs() < 1e-10);
        assert_eq!(r.method, OverlapMethod::Quadrature);
    }

    #[test]
    fn quadrature_unequal_carriers() {
        // Product of two Gaussians centred 3σ apart: amplitude e^{-9/8},
        // probability e^{-9/4}.
        let a = mode(100.0, 1.0, 0.0, 0.0);
        let b = mode(103.0, 1.0, 0.0, 0.0);
        let p = overlap_probability_quadrature(&a, &b, 1e-12).unwrap().probability;
        assert!((p - 0.105_399_224_561_864_33).abs() < 1e-11, "{p}");
    }

    #[test]
    fn energy_of_zero_carrier() {
        let m = GaussianMode { k0: 0.0, ..mode(1.0, 1.0, 0.0, 0.0) };
        let e = energy_expectation(&m, 1e-12).unwrap();
        assert!((e - 1.0 / PI).abs() < 1e-11, "{e}");
    }

    #[test]
    fn energy_matches_leading_asymptotic() {
        let e = energy_expectation(&mode(100.0, 1.0, 0.0, 0.0), 1e-9).unwrap();
        let lead = 100.0 / (2.0 * PI).sqrt();
        assert!(((e - lead) / lead).abs() < 1e-4);
    }
}
