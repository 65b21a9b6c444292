//! Integer-order Bessel functions of the first kind and the kick kernel built
//! from them.
//!
//! `J_m(x)` for all orders at once comes from Miller's backward recurrence
//! `J_{m-1} = (2m/x) J_m - J_{m+1}`, normalised with
//! `J_0 + 2 sum_{k>=1} J_{2k} = 1`. The recurrence is stable in the downward
//! direction, and the normalisation removes the arbitrary starting scale.

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Default truncation for kick kernels.
pub const KERNEL_TOLERANCE: f64 = 1e-16;

/// Orders kept beyond the last `|J_m| >= tol`.
pub const KERNEL_MARGIN: usize = 5;

const RESCALE_ABOVE: f64 = 1e250;

/// `J_0(x) ..= J_n(x)` for `x >= 0` by backward recurrence.
///
/// `n` sets how many orders are returned; the recurrence itself starts far
/// enough above both `n` and `x` that the top orders are accurate.
pub fn bessel_j_orders(x: f64, n: usize) -> Vec<f64> {
    debug_assert!(x >= 0.0 && x.is_finite());
    let mut out = vec![0.0; n + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = {
        let base = n.max(x.ceil() as usize);
        let s = base + 40 + (15.0 * x.cbrt()).ceil() as usize;
        s + (s & 1) // even, so the normalisation sum pairs cleanly
    };

    let mut values = vec![0.0; start + 2];
    values[start] = 1e-30;
    let mut norm = 0.0;
    for m in (1..=start).rev() {
        let next = (2.0 * m as f64 / x) * values[m] - values[m + 1];
        values[m - 1] = next;
        if (m - 1) % 2 == 0 && m - 1 > 0 {
            norm += 2.0 * next;
        }
        if next.abs() > RESCALE_ABOVE {
            for v in &mut values[m - 1..] {
                *v /= RESCALE_ABOVE;
            }
            norm /= RESCALE_ABOVE;
        }
    }
    norm += values[0];
    for (o, v) in out.iter_mut().zip(&values) {
        *o = v / norm;
    }
    out
}

/// `i^(-m)` for integer `m`.
#[inline]
pub fn inverse_i_power(m: i64) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Row of the kick operator in the angular-momentum basis:
/// `c_m = i^(-m) J_m(kappa)` for `m` in `[-M, M]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KickKernel {
    coefficients: Vec<Complex64>,
    bessel: Vec<f64>,
    bandwidth: usize,
    kappa: f64,
}

impl KickKernel {
    /// Kernel truncated at [`KERNEL_TOLERANCE`].
    pub fn new(kappa: f64) -> Result<Self> {
        bessel_j_row(kappa, KERNEL_TOLERANCE)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Half-width `M`; coefficients exist for `m` in `[-M, M]`.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// `c_m` indexed by `m + M`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `c_m`, zero outside the band.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        let idx = m + self.bandwidth as i64;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    /// `J_m(kappa)`, zero outside the band.
    pub fn bessel(&self, m: i64) -> f64 {
        let idx = m + self.bandwidth as i64;
        if idx < 0 || idx as usize >= self.bessel.len() {
            0.0
        } else {
            self.bessel[idx as usize]
        }
    }
}

/// Builds the kick kernel for strength `kappa`, keeping every order with
/// `|J_m| >= tol` plus [`KERNEL_MARGIN`] more.
pub fn bessel_j_row(kappa: f64, tol: f64) -> Result<KickKernel> {
    if !kappa.is_finite() {
        return Err(SimError::NonFiniteKappa(kappa));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SimError::InvalidTolerance(tol));
    }
    if kappa == 0.0 {
        return Ok(KickKernel {
            coefficients: vec![Complex64::new(1.0, 0.0)],
            bessel: vec![1.0],
            bandwidth: 0,
            kappa,
        });
    }

    let x = kappa.abs();
    // J_m(x) < tol is guaranteed once m exceeds x by a comfortable amount;
    // compute that many orders and locate the cut.
    let probe = x.ceil() as usize + 30 + (10.0 * x.cbrt()).ceil() as usize;
    let mut orders = bessel_j_orders(x, probe);
    let last = orders.iter().rposition(|v| v.abs() >= tol).unwrap_or(0);
    let bandwidth = last + KERNEL_MARGIN;
    if bandwidth >= orders.len() {
        orders = bessel_j_orders(x, bandwidth);
    }

    // J_m(-x) = (-1)^m J_m(x); J_{-m}(x) = (-1)^m J_m(x).
    let signed = |m: usize| {
        let v = orders[m];
        if kappa < 0.0 && m % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let mut bessel = Vec::with_capacity(2 * bandwidth + 1);
    for m in -(bandwidth as i64)..=bandwidth as i64 {
        let k = m.unsigned_abs() as usize;
        let v = signed(k);
        bessel.push(if m < 0 && k % 2 == 1 { -v } else { v });
    }
    let coefficients = bessel
        .iter()
        .zip(-(bandwidth as i64)..)
        .map(|(&j, m)| inverse_i_power(m) * j)
        .collect();

    Ok(KickKernel {
        coefficients,
        bessel,
        bandwidth,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series, exact to rounding for small arguments.
    fn series_j(m: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..60 {
            term *= -half * half / (k as f64 * (k + m) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn zero_kappa_is_identity() {
        let k = bessel_j_row(0.0, 1e-16).unwrap();
        assert_eq!(k.bandwidth(), 0);
        assert_eq!(k.coefficients(), &[Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn known_values_at_one() {
        let k = KickKernel::new(1.0).unwrap();
        assert!((k.bessel(0) - 0.7651976866).abs() < 1e-9);
        assert!((k.bessel(1) - 0.4400505857).abs() < 1e-9);
        for m in 0..12 {
            let exact = series_j(m, 1.0);
            assert!(
                ((k.bessel(m as i64) - exact) / exact).abs() < 1e-12,
                "m={m}"
            );
        }
    }

    #[test]
    fn matches_power_series() {
        for &x in &[0.1, 0.5, 2.0, 3.7] {
            let j = bessel_j_orders(x, 15);
            for m in 0..=15u32 {
                let exact = series_j(m, x);
                assert!(
                    (j[m as usize] - exact).abs() <= 1e-12 * exact.abs().max(1e-300) + 1e-17,
                    "x={x} m={m}"
                );
            }
        }
    }

    #[test]
    fn completeness_and_tail() {
        for &kappa in &[0.3, 1.0, -1.0, 2.0, 7.5, 40.0, 120.0] {
            let k = KickKernel::new(kappa).unwrap();
            let total: f64 = k.coefficients().iter().map(|c| c.norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-12, "kappa={kappa} total={total}");
            assert!(k.bessel(k.bandwidth() as i64).abs() < 1e-16);
        }
    }

    #[test]
    fn reflection_relations() {
        let k = KickKernel::new(1.7).unwrap();
        let n = KickKernel::new(-1.7).unwrap();
        for m in -10i64..=10 {
            let sign = if m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            assert!((k.bessel(-m) - sign * k.bessel(m)).abs() < 1e-15);
            assert!((n.bessel(m) - sign * k.bessel(m)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(KickKernel::new(f64::NAN).is_err());
        assert!(bessel_j_row(1.0, 0.0).is_err());
    }

    #[test]
    fn i_powers() {
        assert_eq!(inverse_i_power(1), Complex64::new(0.0, -1.0));
        assert_eq!(inverse_i_power(-1), Complex64::new(0.0, 1.0));
        assert_eq!(inverse_i_power(6), Complex64::new(-1.0, 0.0));
    }
}
