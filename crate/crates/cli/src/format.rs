/// Formats `x` with 9 significant digits, switching to exponent notation
/// outside `[1e-4, 1e9)`.
pub fn sig9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { format!("{:.*}", (DIGITS - 1) as usize, 0.0) } else { x.to_string() };
    }
    // Round first so 9.9999999995 lands in the right decade.
    let rounded: f64 = format!("{:.*e}", (DIGITS - 1) as usize, x).parse().unwrap_or(x);
    let exponent = rounded.abs().log10().floor() as i32;
    if !(-4..DIGITS).contains(&exponent) {
        return format!("{:.*e}", (DIGITS - 1) as usize, x);
    }
    let decimals = (DIGITS - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}
