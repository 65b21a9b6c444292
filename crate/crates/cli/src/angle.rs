//! Angle expressions such as `pi/3`, `-3*pi/8` or `0.5236`.

use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context, Result};

/// Low part of pi in double-double form.
const PI_LO: f64 = 1.2246467991473532e-16;

/// `coef * pi / den`, correctly rounded in practice: the numerator is kept
/// as a double-double and the division remainder is folded back in.
fn pi_fraction(coef: f64, den: f64) -> f64 {
    let hi = coef * PI;
    let lo = coef.mul_add(PI, -hi) + coef * PI_LO;
    let q = hi / den;
    let r = (-q).mul_add(den, hi) + lo;
    q + r / den
}

/// Parses an angle in radians. Multiples of pi are evaluated symbolically,
/// so `pi/3` equals the correctly rounded constant rather than `PI / 3.0`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s).trim()),
    };
    let Some(pos) = body.find("pi") else {
        let v: f64 = body
            .parse()
            .with_context(|| format!("invalid angle `{text}`"))?;
        return Ok(sign * v);
    };
    let coef_text = body[..pos].trim().trim_end_matches('*').trim();
    let coef = if coef_text.is_empty() {
        1.0
    } else {
        coef_text
            .parse::<f64>()
            .with_context(|| format!("invalid coefficient in angle `{text}`"))?
    };
    let rest = body[pos + 2..].trim();
    let den = if rest.is_empty() {
        1.0
    } else {
        let d = rest
            .strip_prefix('/')
            .ok_or_else(|| anyhow!("invalid angle `{text}`"))?
            .trim();
        d.parse::<f64>()
            .with_context(|| format!("invalid denominator in angle `{text}`"))?
    };
    if den == 0.0 {
        bail!("zero denominator in angle `{text}`");
    }
    let v = sign * pi_fraction(coef, den);
    if !v.is_finite() {
        bail!("angle `{text}` is not finite");
    }
    Ok(v)
}
