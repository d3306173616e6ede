//! Two-party causal-inequality guessing game played with Gaussian-localised
//! photon modes in 1+1-D Minkowski spacetime.
//!
//! The crate is split by concern:
//!
//! * [`modes`]: wavepacket overlaps (closed form and quadrature) and the
//!   single-photon energy expectation.
//! * [`game`]: analytic success probability of the guessing game and a
//!   seeded Monte Carlo simulation of the protocol.
//! * [`optimizer`]: optimal timing offset, regime classification, violation
//!   thresholds and parameter sweeps.
//! * [`fock`]: a small truncated Fock-space engine for the mode-selective
//!   mirror and the cross-Kerr CNOT / zero-time feedback circuits.

pub mod error;
pub mod fock;
pub mod game;
pub mod modes;
pub mod optimizer;
pub mod quadrature;

pub use error::{Error, Result};
pub use game::{causal_bound, simulate_game, success_probability, violates_bound, GameConfig,
    MonteCarloReport, SuccessStats};
pub use modes::{energy_expectation, overlap_probability_quadrature, transmission_probability,
    GaussianMode, OverlapMethod, OverlapResult, Polarization};
pub use optimizer::{optimal_dt, sweep, violation_threshold_sigma, OptimumReport, Regime,
    SweepRow, ThresholdResult};
