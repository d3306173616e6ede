//! Adaptive Simpson quadrature for smooth real or complex integrands.
//!
//! The interval is first cut into a fixed number of equal panels so that an
//! oscillating integrand cannot fool the very first Simpson estimate, then each
//! panel is refined recursively until the Richardson error estimate drops below
//! its share of the tolerance.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of interval halvings below an initial panel.
pub const MAX_DEPTH: u32 = 40;

/// Number of equal panels the interval is cut into before refinement.
pub const INITIAL_PANELS: usize = 64;

/// Values that can be integrated: closed under addition and real scaling,
/// with a magnitude for the error estimate.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Integrates `f` over `[a, b]` to absolute error `tol`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    if tol.is_nan() || tol <= 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "quadrature needs finite bounds and tol > 0 (got [{a}, {b}], tol = {tol})"
        )));
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;

    let mut total = f(a) * 0.0;
    for p in 0..INITIAL_PANELS {
        let lo = a + width * p as f64;
        let hi = if p + 1 == INITIAL_PANELS { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = simpson(lo, hi, flo, fmid, fhi);
        total = total + refine(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, 0, tol)?;
    }
    Ok(total)
}

fn simpson<T: Integrand>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn refine<T, F>(
    f: &F,
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: u32,
    requested: f64,
) -> Result<T>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let halves = left + right;
    let delta = halves - whole;

    if delta.magnitude() <= 15.0 * tol {
        return Ok(halves + delta * (1.0 / 15.0));
    }
    if depth >= MAX_DEPTH || m <= a || m >= b {
        return Err(Error::QuadratureFailure { tol: requested, max_depth: MAX_DEPTH });
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, requested)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, requested)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v: f64 = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let v: f64 = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-12).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn complex_oscillation() {
        // ∫_0^{2π} e^{i 7 x} dx = 0
        let v: Complex64 =
            integrate(|x| Complex64::from_polar(1.0, 7.0 * x), 0.0, 2.0 * PI, 1e-10).unwrap();
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn unreachable_tolerance_fails() {
        let r: Result<f64> = integrate(|x| x.sin() * 1e6, 0.0, 3.0, 1e-300);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn rejects_nonpositive_tol() {
        let r: Result<f64> = integrate(|x| x, 0.0, 1.0, 0.0);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }
}
