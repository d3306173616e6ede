//! The guessing game between Alice and Bob.
//!
//! Alice holds input bit `x` and outputs a guess `a` for Bob's bit; Bob holds
//! `y` and outputs `b`. They succeed with probability
//! `½[P(x = b) + P(y = a)]`, which any definite causal order caps at 3/4.
//!
//! Each party sends its bit as the polarisation of a photon in its own lab
//! mode. A photon that makes it through the receiver's mode-selective mirror is
//! read out without error; otherwise the receiver guesses with a fair coin.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{transmission_probability, GaussianMode, OverlapResult};

/// Upper bound on the success probability under a definite causal order.
pub fn causal_bound() -> f64 {
    0.75
}

/// Strict comparison against [`causal_bound`].
pub fn violates_bound(p_succ: f64) -> bool {
    p_succ > causal_bound()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    /// Spectral width of Alice's lab mode.
    pub sigma_a: f64,
    /// Spectral width of Bob's lab mode.
    pub sigma_b: f64,
    /// Effective propagation separation `x_B - x_A`.
    pub tau: f64,
    /// Timing offset `t_B - t_A`.
    pub dt: f64,
    /// Shared carrier wavenumber.
    pub k0: f64,
}

impl GameConfig {
    /// Config with the default carrier `k0 = 100·max(σ_A, σ_B)`.
    pub fn new(sigma_a: f64, sigma_b: f64, tau: f64, dt: f64) -> Self {
        GameConfig { sigma_a, sigma_b, tau, dt, k0: default_k0(sigma_a, sigma_b) }
    }

    pub fn symmetric(sigma: f64, tau: f64, dt: f64) -> Self {
        Self::new(sigma, sigma, tau, dt)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.sigma_a) || !positive(self.sigma_b) {
            return Err(Error::InvalidMode(format!(
                "widths must be positive (sigma_a = {}, sigma_b = {})",
                self.sigma_a, self.sigma_b
            )));
        }
        if !positive(self.tau) {
            return Err(Error::InvalidConfig(format!("tau must be positive, got {}", self.tau)));
        }
        if !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be finite, got {}", self.dt)));
        }
        if !positive(self.k0) {
            return Err(Error::InvalidMode(format!("k0 must be positive, got {}", self.k0)));
        }
        Ok(())
    }

    /// Alice's mode: emitted at `t_A = 0`. The receiving mode for the photon
    /// coming back from Bob sits one separation `τ` downstream of Bob's mode.
    fn modes(&self) -> Result<Directions> {
        let alice_send = GaussianMode::new(self.k0, self.sigma_a, 0.0, 0.0)?;
        let bob_recv = GaussianMode::new(self.k0, self.sigma_b, self.dt, self.tau)?;
        let bob_send = GaussianMode::new(self.k0, self.sigma_b, self.dt, 0.0)?;
        let alice_recv = GaussianMode::new(self.k0, self.sigma_a, 0.0, self.tau)?;
        Ok(Directions { alice_send, bob_recv, bob_send, alice_recv })
    }
}

pub fn default_k0(sigma_a: f64, sigma_b: f64) -> f64 {
    100.0 * sigma_a.max(sigma_b)
}

struct Directions {
    alice_send: GaussianMode,
    bob_recv: GaussianMode,
    bob_send: GaussianMode,
    alice_recv: GaussianMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessStats {
    /// Alice's photon passes Bob's input mirror.
    pub p_transmit_ab: f64,
    /// Bob's photon passes Alice's input mirror.
    pub p_transmit_ba: f64,
    /// `P(x = b)`.
    pub p_bob_guesses_right: f64,
    /// `P(y = a)`.
    pub p_alice_guesses_right: f64,
    pub p_succ: f64,
    /// `p_succ > 3/4`, compared on the rounded `p_succ`.
    pub violates_bound: bool,
    /// `p_succ - 3/4 = ¼(p_ab + p_ba - 1)`, computed from the transmission
    /// complements so it stays accurate when `p_succ` rounds to 3/4.
    pub violation_margin: f64,
}

impl SuccessStats {
    pub fn from_transmissions(p_ab: f64, p_ba: f64) -> Self {
        Self::from_parts(p_ab, 1.0 - p_ab, p_ba, 1.0 - p_ba)
    }

    /// Like [`SuccessStats::from_transmissions`] with accurately known
    /// complements `1 - p`.
    pub fn from_parts(p_ab: f64, miss_ab: f64, p_ba: f64, miss_ba: f64) -> Self {
        // p_ab + p_ba - 1, subtracting the small complement from the smaller
        // probability.
        let excess = if p_ab >= p_ba { p_ba - miss_ab } else { p_ab - miss_ba };
        let guess = |p: f64| p + 0.5 * (1.0 - p);
        let p_bob = guess(p_ab);
        let p_alice = guess(p_ba);
        let p_succ = 0.5 * (p_bob + p_alice);
        SuccessStats {
            p_transmit_ab: p_ab,
            p_transmit_ba: p_ba,
            p_bob_guesses_right: p_bob,
            p_alice_guesses_right: p_alice,
            p_succ,
            violates_bound: violates_bound(p_succ),
            violation_margin: 0.25 * excess,
        }
    }
}

/// Transmission probabilities in both directions for `config`.
///
/// The A→B delay argument is `Δt - τ` and the B→A one is `-Δt - τ`, so for
/// equal widths `P_succ = ¼[2 + e^{-(τ-Δt)²σ²} + e^{-(τ+Δt)²σ²}]`.
pub fn transmissions(config: &GameConfig) -> Result<(OverlapResult, OverlapResult)> {
    config.validate()?;
    let m = config.modes()?;
    let ab = transmission_probability(&m.alice_send, &m.bob_recv)?;
    let ba = transmission_probability(&m.bob_send, &m.alice_recv)?;
    Ok((ab, ba))
}

pub fn success_probability(config: &GameConfig) -> Result<SuccessStats> {
    let (ab, ba) = transmissions(config)?;
    Ok(SuccessStats::from_parts(ab.probability, ab.complement, ba.probability, ba.complement))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub n_rounds: u64,
    pub empirical_p_succ: f64,
    /// `sqrt(p̂(1 - p̂)/n)` of the per-round success indicator.
    pub standard_error: f64,
    pub empirical_p_xb: f64,
    pub empirical_p_ya: f64,
    pub seed: u64,
}

/// ChaCha words consumed per round: three u64 draws.
const WORDS_PER_ROUND: u128 = 6;
const ROUNDS_PER_CHUNK: u64 = 1 << 14;

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    xb: u64,
    ya: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally { xb: self.xb + o.xb, ya: self.ya + o.ya }
    }
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Plays rounds `[start, end)`. Round `r` reads the ChaCha keystream of
/// `seed` at word offset `6r`, so the outcome of a round does not depend on
/// how rounds are grouped.
fn play_chunk(seed: u64, start: u64, end: u64, p_ab: f64, p_ba: f64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(start as u128 * WORDS_PER_ROUND);
    let mut tally = Tally::default();
    for _ in start..end {
        let bits = rng.next_u64();
        let x = bits & 1 == 1;
        let y = bits & 2 == 2;
        let alice_coin = bits & 4 == 4;
        let bob_coin = bits & 8 == 8;
        let delivered_ab = unit_interval(rng.next_u64()) < p_ab;
        let delivered_ba = unit_interval(rng.next_u64()) < p_ba;

        let b = if delivered_ab { x } else { bob_coin };
        let a = if delivered_ba { y } else { alice_coin };
        tally.xb += u64::from(x == b);
        tally.ya += u64::from(y == a);
    }
    tally
}

/// Monte Carlo run of the protocol with the transmission probabilities of
/// `config`. Deterministic in `seed` whatever the number of worker threads.
pub fn simulate_game(config: &GameConfig, n_rounds: u64, seed: u64) -> Result<MonteCarloReport> {
    if n_rounds == 0 {
        return Err(Error::InvalidConfig("n_rounds must be at least 1".into()));
    }
    let (ab, ba) = transmissions(config)?;
    let (p_ab, p_ba) = (ab.probability, ba.probability);

    let n_chunks = n_rounds.div_ceil(ROUNDS_PER_CHUNK);
    let chunk = |c: u64| {
        let start = c * ROUNDS_PER_CHUNK;
        let end = (start + ROUNDS_PER_CHUNK).min(n_rounds);
        play_chunk(seed, start, end, p_ab, p_ba)
    };

    #[cfg(feature = "parallel")]
    let tally = {
        use rayon::prelude::*;
        (0..n_chunks).into_par_iter().map(chunk).reduce(Tally::default, |a, b| a + b)
    };
    #[cfg(not(feature = "parallel"))]
    let tally = (0..n_chunks).map(chunk).fold(Tally::default(), |a, b| a + b);

    let n = n_rounds as f64;
    let p_xb = tally.xb as f64 / n;
    let p_ya = tally.ya as f64 / n;
    let p_succ = (tally.xb + tally.ya) as f64 / (2.0 * n);
    Ok(MonteCarloReport {
        n_rounds,
        empirical_p_succ: p_succ,
        standard_error: (p_succ * (1.0 - p_succ) / n).sqrt(),
        empirical_p_xb: p_xb,
        empirical_p_ya: p_ya,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_three_quarters_and_non_strict() {
        assert_eq!(causal_bound(), 0.75);
        assert!(!violates_bound(0.75));
        assert!(violates_bound(0.750_000_1));
    }

    #[test]
    fn symmetric_threshold_hits_bound_exactly() {
        let sigma = 2f64.ln().sqrt();
        let s = success_probability(&GameConfig::symmetric(sigma, 1.0, 0.0)).unwrap();
        assert!((s.p_succ - 0.75).abs() < 1e-12);
        assert!(!s.violates_bound);
    }

    #[test]
    fn light_like_offset_formula() {
        let s = success_probability(&GameConfig::symmetric(1.0, 1.0, 1.0)).unwrap();
        let expect = 0.25 * (3.0 + (-4.0f64).exp());
        assert!((s.p_succ - expect).abs() < 1e-15);
        assert!((s.p_succ - 0.754_578_909_7).abs() < 1e-10);
        assert!(s.violates_bound);
        assert_eq!(s.p_transmit_ab, 1.0);
    }

    #[test]
    fn delocalised_limit_approaches_one() {
        let s = success_probability(&GameConfig::symmetric(1e-4, 1.0, 0.0)).unwrap();
        assert!(s.p_succ > 1.0 - 1e-8);
    }

    #[test]
    fn guess_probability_structure() {
        let s = success_probability(&GameConfig::new(0.7, 1.3, 1.0, 0.4)).unwrap();
        let g = |p: f64| p + (1.0 - p) / 2.0;
        assert!((s.p_bob_guesses_right - g(s.p_transmit_ab)).abs() < 1e-15);
        assert!((s.p_alice_guesses_right - g(s.p_transmit_ba)).abs() < 1e-15);
        assert!(
            (s.p_succ - 0.5 * (s.p_bob_guesses_right + s.p_alice_guesses_right)).abs() < 1e-15
        );
    }

    #[test]
    fn no_transmission_gives_coin_flip() {
        let s = SuccessStats::from_transmissions(0.0, 0.0);
        assert_eq!(s.p_succ, 0.5);
        assert_eq!(s.violation_margin, -0.25);
        assert!(!s.violates_bound);
    }

    #[test]
    fn margin_survives_rounding_of_p_succ() {
        // ¼(3 + e^{-64}) rounds to 3/4 but the excess is still ¼e^{-64}.
        let s = success_probability(&GameConfig::symmetric(4.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.p_succ, 0.75);
        let expect = 0.25 * (-64.0f64).exp();
        assert!(((s.violation_margin - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(matches!(
            success_probability(&GameConfig::symmetric(0.0, 1.0, 0.0)),
            Err(Error::InvalidMode(_))
        ));
        assert!(matches!(
            success_probability(&GameConfig::symmetric(1.0, -1.0, 0.0)),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            simulate_game(&GameConfig::symmetric(1.0, 1.0, 0.0), 0, 1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn certain_delivery_is_always_right() {
        let r = simulate_game(&GameConfig::symmetric(1e-12, 1.0, 0.0), 50_000, 3).unwrap();
        assert_eq!(r.empirical_p_succ, 1.0);
        assert_eq!(r.standard_error, 0.0);
    }

    #[test]
    fn chunking_does_not_change_rounds() {
        let (p_ab, p_ba) = (0.3, 0.8);
        let whole = play_chunk(11, 0, 1000, p_ab, p_ba);
        let split = play_chunk(11, 0, 357, p_ab, p_ba) + play_chunk(11, 357, 1000, p_ab, p_ba);
        assert_eq!((whole.xb, whole.ya), (split.xb, split.ya));
    }
}
