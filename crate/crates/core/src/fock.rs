//! Truncated Fock-space engine for few-photon circuits.
//!
//! States are sparse maps from occupation vectors to complex amplitudes over
//! an ordered list of labelled modes. Passive two-mode transformations are
//! applied to creation operators and expanded binomially, so photon number is
//! conserved term by term.
//!
//! The circuits built on it:
//!
//! * the mode-selective mirror, which swaps every non-lab outside mode into
//!   a reflected inside mode and leaves the lab mode alone;
//! * the open-loop dual-rail CNOT made from two 50:50 beamsplitters around a
//!   π cross-Kerr phase;
//! * the same CNOT with its target rails fed back from its own outputs in the
//!   zero-delay limit.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default photon-number truncation.
pub const DEFAULT_N_MAX: usize = 2;

const NORM_TOL: f64 = 1e-12;

type Occupation = Vec<u8>;
type Amplitudes = BTreeMap<Occupation, Complex64>;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    labels: Vec<String>,
    amplitudes: Amplitudes,
    n_max: usize,
}

impl FockState {
    pub fn vacuum<S: AsRef<str>>(labels: &[S], n_max: usize) -> Self {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut amplitudes = Amplitudes::new();
        amplitudes.insert(vec![0; labels.len()], Complex64::new(1.0, 0.0));
        FockState { labels, amplitudes, n_max }
    }

    /// Builds a state from explicit `(occupation, amplitude)` terms.
    /// Repeated occupations are summed; the result must be normalised.
    pub fn from_terms<S, I>(labels: &[S], n_max: usize, terms: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Vec<u8>, Complex64)>,
    {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidState(format!("duplicate mode label `{l}`")));
            }
        }
        let mut amplitudes = Amplitudes::new();
        for (occ, amp) in terms {
            if occ.len() != labels.len() {
                return Err(Error::InvalidState(format!(
                    "occupation {occ:?} has {} entries for {} modes",
                    occ.len(),
                    labels.len()
                )));
            }
            if occ.iter().map(|&n| n as usize).sum::<usize>() > n_max {
                return Err(Error::TruncationOverflow { n_max });
            }
            *amplitudes.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let state = FockState { labels, amplitudes, n_max };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm² is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// One photon spread over the modes with the given amplitudes.
    pub fn single_photon<S: AsRef<str>>(
        labels: &[S],
        n_max: usize,
        amplitudes: &[Complex64],
    ) -> Result<Self> {
        if amplitudes.len() != labels.len() {
            return Err(Error::InvalidState("one amplitude per mode required".into()));
        }
        let terms = amplitudes.iter().enumerate().map(|(i, &a)| {
            let mut occ = vec![0u8; labels.len()];
            occ[i] = 1;
            (occ, a)
        });
        Self::from_terms(labels, n_max, terms)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], Complex64)> {
        self.amplitudes.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn amplitude(&self, occupation: &[u8]) -> Complex64 {
        self.amplitudes.get(occupation).copied().unwrap_or_default()
    }

    pub fn probability(&self, occupation: &[u8]) -> f64 {
        self.amplitude(occupation).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Photon numbers carried by nonzero terms.
    pub fn photon_numbers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .amplitudes
            .iter()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, _)| k.iter().map(|&n| n as usize).sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownMode(label.to_owned()))
    }

    fn pair(&self, mode_i: &str, mode_j: &str) -> Result<(usize, usize)> {
        let i = self.mode_index(mode_i)?;
        let j = self.mode_index(mode_j)?;
        if i == j {
            return Err(Error::InvalidState(format!("mode `{mode_i}` paired with itself")));
        }
        Ok((i, j))
    }

    /// Same amplitudes under new mode names.
    pub fn relabel<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::InvalidState("relabel must keep the mode count".into()));
        }
        self.labels = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        Ok(self)
    }

    /// Reduced density matrix of one mode over photon numbers `0..=n_max`.
    pub fn reduced_density_matrix(&self, mode: &str) -> Result<Vec<Vec<Complex64>>> {
        let m = self.mode_index(mode)?;
        let dim = self.n_max + 1;
        // Group amplitudes by the occupation of every other mode.
        let mut by_rest: BTreeMap<Occupation, Vec<Complex64>> = BTreeMap::new();
        for (occ, &amp) in &self.amplitudes {
            let mut rest = occ.clone();
            let n = rest.remove(m) as usize;
            by_rest.entry(rest).or_insert_with(|| vec![Complex64::default(); dim])[n] += amp;
        }
        let mut rho = vec![vec![Complex64::default(); dim]; dim];
        for column in by_rest.values() {
            for (r, row) in rho.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry += column[r] * column[c].conj();
                }
            }
        }
        Ok(rho)
    }
}

/// A passive two-mode transformation, given by its action on creation
/// operators: `a_i† ↦ m[0][0] a_i† + m[1][0] a_j†`,
/// `a_j† ↦ m[0][1] a_i† + m[1][1] a_j†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeUnitary(pub [[Complex64; 2]; 2]);

impl TwoModeUnitary {
    /// `a_i† ↦ (a_i† + a_j†)/√2`, `a_j† ↦ (a_i† − a_j†)/√2`.
    pub fn beamsplitter_50_50() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        TwoModeUnitary([[h, h], [h, -h]])
    }

    /// `exp(iθ(a_i a_j† + a_i† a_j))`: `a_i† ↦ cos θ a_i† + i sin θ a_j†`.
    pub fn coupler(theta: f64) -> Self {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::new(0.0, theta.sin());
        TwoModeUnitary([[c, s], [s, c]])
    }

    /// The θ = π/2 coupler with exact entries: `a_i† ↦ i a_j†` and back.
    pub fn reflection() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        TwoModeUnitary([[z, i], [i, z]])
    }

    /// Deviation of `U†U` from the identity (max entry).
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.0;
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let dot = m[0][r].conj() * m[0][c] + m[1][r].conj() * m[1][c];
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Applies `u` to modes `mode_i`, `mode_j` of `state`.
pub fn apply_two_mode(
    state: &FockState,
    mode_i: &str,
    mode_j: &str,
    u: &TwoModeUnitary,
) -> Result<FockState> {
    let (i, j) = state.pair(mode_i, mode_j)?;
    let m = &u.0;
    let mut out = Amplitudes::new();
    for (occ, &amp) in &state.amplitudes {
        let (ni, nj) = (occ[i] as usize, occ[j] as usize);
        let norm_in = (factorial(ni) * factorial(nj)).sqrt();
        // (m00 X + m10 Y)^ni (m01 X + m11 Y)^nj with X = a_i†, Y = a_j†.
        for p in 0..=ni {
            for q in 0..=nj {
                let coeff = m[0][0].powu(p as u32)
                    * m[1][0].powu((ni - p) as u32)
                    * m[0][1].powu(q as u32)
                    * m[1][1].powu((nj - q) as u32)
                    * (binomial(ni, p) * binomial(nj, q));
                if coeff == Complex64::default() {
                    continue;
                }
                let out_i = p + q;
                let out_j = ni + nj - out_i;
                let norm_out = (factorial(out_i) * factorial(out_j)).sqrt();
                let mut target = occ.clone();
                target[i] = out_i as u8;
                target[j] = out_j as u8;
                *out.entry(target).or_default() += amp * coeff * (norm_out / norm_in);
            }
        }
    }
    // Passive optics conserves the photon number of every term.
    assert!(
        out.keys().all(|k| k.iter().map(|&n| n as usize).sum::<usize>() <= state.n_max),
        "passive transformation exceeded truncation"
    );
    out.retain(|_, a| a.norm_sqr() > 0.0);
    Ok(FockState { labels: state.labels.clone(), amplitudes: out, n_max: state.n_max })
}

/// 50:50 beamsplitter on `mode_i`, `mode_j`.
pub fn apply_beamsplitter(state: &FockState, mode_i: &str, mode_j: &str) -> Result<FockState> {
    apply_two_mode(state, mode_i, mode_j, &TwoModeUnitary::beamsplitter_50_50())
}

/// Cross-Kerr phase `exp(i·phase·n_i·n_j)`.
pub fn apply_cross_kerr(
    state: &FockState,
    mode_i: &str,
    mode_j: &str,
    phase: f64,
) -> Result<FockState> {
    let (i, j) = state.pair(mode_i, mode_j)?;
    let amplitudes = state
        .amplitudes
        .iter()
        .map(|(occ, &amp)| {
            let n = (occ[i] as u32 * occ[j] as u32) as f64;
            (occ.clone(), amp * Complex64::from_polar(1.0, phase * n))
        })
        .collect();
    Ok(FockState { labels: state.labels.clone(), amplitudes, n_max: state.n_max })
}

/// Lab-mode state after a mode-selective mirror: diagonal over `{|0⟩, |1⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeMixedState {
    /// One-photon weight.
    pub eta: f64,
    /// `rho[n][m] = ⟨n|ρ|m⟩`.
    pub rho: [[Complex64; 2]; 2],
}

impl SingleModeMixedState {
    /// `ρ = η|1⟩⟨1| + (1 − η)|0⟩⟨0|`.
    pub fn closed_form(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        let z = Complex64::default();
        Ok(SingleModeMixedState {
            eta,
            rho: [[Complex64::new(1.0 - eta, 0.0), z], [z, Complex64::new(eta, 0.0)]],
        })
    }

    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re
    }

    /// Largest entrywise distance between two states.
    pub fn max_deviation(&self, other: &SingleModeMixedState) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.rho[r][c] - other.rho[r][c]).norm());
            }
        }
        worst
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::InvalidEta(eta))
    }
}

pub const LAB_MODE: &str = "a0";
pub const OUTSIDE_MODE: &str = "a_perp";
pub const REFLECTED_MODE: &str = "b_perp";

/// Sends `√η|a₀⟩ + √(1−η)|a_⊥⟩` through the mirror, which exchanges
/// `a_⊥ ↔ i·b_⊥`, and traces out everything but the lab mode.
pub fn mode_selective_mirror(eta: f64, input_has_photon: bool) -> Result<SingleModeMixedState> {
    check_eta(eta)?;
    let labels = [LAB_MODE, OUTSIDE_MODE, REFLECTED_MODE];
    let incoming = if input_has_photon {
        let amps = [
            Complex64::new(eta.sqrt(), 0.0),
            Complex64::new((1.0 - eta).sqrt(), 0.0),
            Complex64::default(),
        ];
        FockState::single_photon(&labels, DEFAULT_N_MAX, &amps)?
    } else {
        FockState::vacuum(&labels, DEFAULT_N_MAX)
    };
    let through =
        apply_two_mode(&incoming, OUTSIDE_MODE, REFLECTED_MODE, &TwoModeUnitary::reflection())?;
    let full = through.reduced_density_matrix(LAB_MODE)?;

    let leaked: f64 = full.iter().skip(2).map(|row| row.iter().map(|a| a.norm()).sum::<f64>()).sum();
    if leaked > NORM_TOL {
        return Err(Error::TruncationOverflow { n_max: 1 });
    }
    let rho = [[full[0][0], full[0][1]], [full[1][0], full[1][1]]];
    Ok(SingleModeMixedState { eta: rho[1][1].re, rho })
}

/// Dual-rail qubit: `α|0⟩ + β|1⟩` with the photon on rail 0 or rail 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRailQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl DualRailQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("|α|² + |β|² = {norm}, expected 1")));
        }
        Ok(DualRailQubit { alpha, beta })
    }

    pub fn from_real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    pub fn zero() -> Self {
        DualRailQubit { alpha: Complex64::new(1.0, 0.0), beta: Complex64::default() }
    }

    pub fn one() -> Self {
        DualRailQubit { alpha: Complex64::default(), beta: Complex64::new(1.0, 0.0) }
    }

    pub fn basis(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    fn rail(&self, bit: bool) -> Complex64 {
        if bit {
            self.beta
        } else {
            self.alpha
        }
    }
}

/// Control rails: logical 0 on `a`, logical 1 on `a'`.
pub const CONTROL_RAILS: [&str; 2] = ["a", "a'"];
/// Target input rails: logical 0 on `b`, logical 1 on `b'`.
pub const TARGET_RAILS: [&str; 2] = ["b", "b'"];
/// Output rails after recombination: logical 0 on `d+`, logical 1 on `d-`.
pub const OUTPUT_RAILS: [&str; 2] = ["d+", "d-"];

/// Phase picked up by the basis input `|c, t⟩` of [`cnot_open_loop`]:
/// `|c, t⟩ ↦ phase · |c, t ⊕ c⟩`. With the beamsplitter convention above the
/// phase is +1 for control 0 and −1 for control 1.
pub fn cnot_basis_phase(control: bool, _target: bool) -> Complex64 {
    if control {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Dual-rail CNOT: a beamsplitter splits the target rails, the arm on `b`
/// picks up a π cross-Kerr phase conditioned on the control's `a'` rail, and
/// a second beamsplitter recombines the arms into `d±`.
///
/// The returned state has modes `a, a', d+, d-`.
pub fn cnot_open_loop(control: &DualRailQubit, target: &DualRailQubit) -> Result<FockState> {
    DualRailQubit::new(control.alpha, control.beta)?;
    DualRailQubit::new(target.alpha, target.beta)?;
    let labels = [CONTROL_RAILS[0], CONTROL_RAILS[1], TARGET_RAILS[0], TARGET_RAILS[1]];
    let mut terms = Vec::with_capacity(4);
    for c in [false, true] {
        for t in [false, true] {
            let occ = vec![u8::from(!c), u8::from(c), u8::from(!t), u8::from(t)];
            terms.push((occ, control.rail(c) * target.rail(t)));
        }
    }
    let state = FockState::from_terms(&labels, DEFAULT_N_MAX, terms)?;
    let state = apply_beamsplitter(&state, TARGET_RAILS[0], TARGET_RAILS[1])?;
    let state = apply_cross_kerr(&state, TARGET_RAILS[0], CONTROL_RAILS[1], PI)?;
    let state = apply_beamsplitter(&state, TARGET_RAILS[0], TARGET_RAILS[1])?;
    state.relabel(&[CONTROL_RAILS[0], CONTROL_RAILS[1], OUTPUT_RAILS[0], OUTPUT_RAILS[1]])
}

/// Joint distribution `p[control][target]` of the logical values of two
/// dual-rail qubits found in `state` on the given rails.
pub fn dual_rail_distribution(
    state: &FockState,
    control_rails: [&str; 2],
    target_rails: [&str; 2],
) -> Result<[[f64; 2]; 2]> {
    let idx = [
        state.mode_index(control_rails[0])?,
        state.mode_index(control_rails[1])?,
        state.mode_index(target_rails[0])?,
        state.mode_index(target_rails[1])?,
    ];
    let mut p = [[0.0; 2]; 2];
    for (occ, amp) in state.terms() {
        let c = (occ[idx[0]], occ[idx[1]]);
        let t = (occ[idx[2]], occ[idx[3]]);
        let bit = |pair: (u8, u8)| match pair {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            _ => None,
        };
        if let (Some(cb), Some(tb)) = (bit(c), bit(t)) {
            p[cb][tb] += amp.norm_sqr();
        }
    }
    Ok(p)
}

/// Detection probabilities at `d+` and `d-` for the CNOT whose target rails
/// are its own outputs with zero loop delay (`b = a`, `b' = a'_out`).
///
/// The output operators are
/// `d± = ½[(P ± 1) a + (P ∓ 1) K a']` with `P = exp(-iπ a'†a')` and
/// `K = exp(-iπ c†c)`. Acting on a single-photon input, the annihilators leave
/// the vacuum, on which `P` and `K` are both the identity, so the loop reduces
/// to the identity channel: the result is `(|α|², |β|²)`.
pub fn cnot_feedback_zero_time(qubit: &DualRailQubit) -> Result<(f64, f64)> {
    let q = DualRailQubit::new(qubit.alpha, qubit.beta)?;
    let input = FockState::single_photon(&CONTROL_RAILS, 1, &[q.alpha, q.beta])?;
    let (ia, ib) = (input.mode_index(CONTROL_RAILS[0])?, input.mode_index(CONTROL_RAILS[1])?);

    let output = |sign: f64| {
        // ½(P + sign) a |ψ⟩ + ½(P − sign) K a' |ψ⟩
        let via_a = parity_plus(&annihilate(&input.amplitudes, ia), ib, sign);
        let via_a_prime = parity_plus(&total_parity(&annihilate(&input.amplitudes, ib)), ib, -sign);
        let mut sum = via_a;
        for (k, v) in via_a_prime {
            *sum.entry(k).or_default() += v;
        }
        sum.values().map(|a| (a * 0.5).norm_sqr()).sum::<f64>()
    };
    Ok((output(1.0), output(-1.0)))
}

/// `a_m` on a raw ket.
fn annihilate(ket: &Amplitudes, mode: usize) -> Amplitudes {
    ket.iter()
        .filter(|(occ, _)| occ[mode] > 0)
        .map(|(occ, &amp)| {
            let mut lowered = occ.clone();
            lowered[mode] -= 1;
            (lowered, amp * (occ[mode] as f64).sqrt())
        })
        .collect()
}

/// `(exp(-iπ n_mode) + sign)` on a raw ket.
fn parity_plus(ket: &Amplitudes, mode: usize, sign: f64) -> Amplitudes {
    ket.iter()
        .map(|(occ, &amp)| {
            let parity = if occ[mode] % 2 == 0 { 1.0 } else { -1.0 };
            (occ.clone(), amp * (parity + sign))
        })
        .collect()
}

/// `exp(-iπ c†c)` on a ket of the loop modes. `c` is a linear combination of
/// the loop modes, so on any ket its number parity equals the total one when
/// the ket has at most one photon, which is all the loop ever carries here.
fn total_parity(ket: &Amplitudes) -> Amplitudes {
    ket.iter()
        .map(|(occ, &amp)| {
            let n: u32 = occ.iter().map(|&n| n as u32).sum();
            debug_assert!(n <= 1);
            (occ.clone(), if n.is_multiple_of(2) { amp } else { -amp })
        })
        .collect()
}
