//! Resonant quantum kicked rotor in the angular-momentum basis.
//!
//! One period of the map multiplies each amplitude by the free-rotation phase
//! and then convolves with the kick kernel:
//!
//! ```text
//! b_j  = exp(-i phi(j)) a_j
//! a'_l = sum_m c_m b_{l+m},     c_m = i^(-m) J_m(kappa)
//! ```
//!
//! which is `a'_l = sum_j U_lj a_j` with
//! `U_lj = i^-(j-l) exp(-i phi(j)) J_{j-l}(kappa)`. At resonance `phi(j)`
//! depends only on `j^2 mod q`, so the phases are tabulated once per map.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::KickKernel;
use crate::error::{Result, SimError};
use crate::moments::Moments;

/// Amplitudes below this probability at the edge of the support are dropped.
const TRIM_PROBABILITY: f64 = 1e-40;

/// Largest lattice a rotor state may grow to.
pub const MAX_SITES: usize = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// `phi(l) = 2 pi (p/q) l^2`: integer `p/q` is a primary resonance and
    /// `p/q = 1/2` the antiresonance.
    #[default]
    Standard,
    /// `phi(l) = 8 pi (p/q) l^2`, the exponent exactly as printed with
    /// `tau = 4 pi p/q`.
    PaperLiteral,
}

impl PhaseConvention {
    fn multiplier(self) -> u128 {
        match self {
            PhaseConvention::Standard => 1,
            PhaseConvention::PaperLiteral => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceParams {
    pub p: u64,
    pub q: u64,
    pub kappa1: f64,
    pub kappa2: f64,
    #[serde(default)]
    pub phase_convention: PhaseConvention,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ResonanceParams {
    pub fn new(p: u64, q: u64, kappa1: f64, kappa2: f64) -> Result<Self> {
        let params = Self {
            p,
            q,
            kappa1,
            kappa2,
            phase_convention: PhaseConvention::Standard,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_convention(mut self, convention: PhaseConvention) -> Self {
        self.phase_convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 || self.p == 0 || gcd(self.p, self.q) != 1 {
            return Err(SimError::InvalidResonance {
                p: self.p,
                q: self.q,
            });
        }
        for k in [self.kappa1, self.kappa2] {
            if !k.is_finite() {
                return Err(SimError::NonFiniteKappa(k));
            }
        }
        Ok(())
    }

    /// `p/q` is an integer.
    pub fn is_primary(&self) -> bool {
        self.q == 1
    }

    pub fn ratio(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// `exp(-2 pi i r / q)`, exact when the angle is a multiple of a quarter turn.
fn unit_phase(r: u64, q: u64) -> Complex64 {
    let r = r % q;
    if (4 * r as u128).is_multiple_of(q as u128) {
        return match (4 * r as u128 / q as u128) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
    }
    let angle = -std::f64::consts::TAU * (r as f64 / q as f64);
    Complex64::new(angle.cos(), angle.sin())
}

fn phase_residue(residue: u64, params: &ResonanceParams) -> u64 {
    let q = params.q as u128;
    let sq = (residue as u128 * residue as u128) % q;
    ((params.phase_convention.multiplier() * params.p as u128 % q * sq) % q) as u64
}

/// Free-rotation phase `exp(-i phi(ell))` at resonance.
pub fn resonance_phase(ell: i64, params: &ResonanceParams) -> Complex64 {
    let residue = ell.rem_euclid(params.q as i64) as u64;
    unit_phase(phase_residue(residue, params), params.q)
}

/// One-period evolution operator `U(kappa)` at a fixed resonance.
#[derive(Debug, Clone)]
pub struct RotorMap {
    kernel: KickKernel,
    /// Phase of every `ell` with `ell mod q == index`.
    phases: Vec<Complex64>,
}

impl RotorMap {
    pub fn new(kappa: f64, params: &ResonanceParams) -> Result<Self> {
        params.validate()?;
        Ok(Self::from_kernel(KickKernel::new(kappa)?, params))
    }

    pub fn from_kernel(kernel: KickKernel, params: &ResonanceParams) -> Self {
        let phases = (0..params.q)
            .map(|r| unit_phase(phase_residue(r, params), params.q))
            .collect();
        Self { kernel, phases }
    }

    pub fn kernel(&self) -> &KickKernel {
        &self.kernel
    }

    pub fn bandwidth(&self) -> usize {
        self.kernel.bandwidth()
    }

    /// Dense matrix element `U_{ell, j}`.
    pub fn element(&self, ell: i64, j: i64) -> Complex64 {
        let q = self.phases.len() as i64;
        self.kernel.coefficient(j - ell) * self.phases[j.rem_euclid(q) as usize]
    }
}

/// Rotor wavefunction `a_ell` on the lattice `ell in [-L, L]`.
#[derive(Debug, Clone)]
pub struct RotorState {
    amplitudes: Vec<Complex64>,
    scratch: Vec<Complex64>,
    offset: usize,
    /// Inclusive index range outside of which every amplitude is zero.
    lo: usize,
    hi: usize,
    time: u64,
}

impl RotorState {
    /// `a_0 = 1` on a lattice of half-width `half_width`.
    pub fn position_eigenstate(half_width: usize) -> Self {
        let half_width = half_width.max(1);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * half_width + 1];
        amplitudes[half_width] = Complex64::new(1.0, 0.0);
        Self {
            scratch: vec![Complex64::new(0.0, 0.0); amplitudes.len()],
            amplitudes,
            offset: half_width,
            lo: half_width,
            hi: half_width,
            time: 0,
        }
    }

    /// State from explicit amplitudes; `amplitudes[k]` belongs to `ell = k - L`
    /// with `L = (len - 1) / 2`. The length must be odd.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len().is_multiple_of(2) {
            return Err(SimError::InvalidConfig(
                "rotor lattice must have an odd number of sites".into(),
            ));
        }
        let offset = amplitudes.len() / 2;
        let lo = amplitudes
            .iter()
            .position(|a| a.norm_sqr() > 0.0)
            .unwrap_or(offset);
        let hi = amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(offset);
        Ok(Self {
            scratch: vec![Complex64::new(0.0, 0.0); amplitudes.len()],
            amplitudes,
            offset,
            lo,
            hi,
            time: 0,
        })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// Current half-width `L` of the lattice.
    pub fn half_width(&self) -> usize {
        self.offset
    }

    /// `a_ell`, zero off the lattice.
    pub fn amplitude(&self, ell: i64) -> Complex64 {
        let idx = ell + self.offset as i64;
        if idx < 0 || idx as usize >= self.amplitudes.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[idx as usize]
        }
    }

    /// All amplitudes, `ell = -L ..= L`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|a_ell|^2` for `ell = -L ..= L`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Smallest and largest `ell` that may carry amplitude.
    pub fn support(&self) -> (i64, i64) {
        (
            self.lo as i64 - self.offset as i64,
            self.hi as i64 - self.offset as i64,
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes[self.lo..=self.hi]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Probability on the two outermost lattice sites.
    pub fn boundary_mass(&self) -> f64 {
        self.amplitudes[0].norm_sqr() + self.amplitudes[self.amplitudes.len() - 1].norm_sqr()
    }

    pub fn moments(&self) -> Moments {
        let offset = self.offset as i64;
        Moments::accumulate(
            (self.lo..=self.hi).map(|k| (k as i64 - offset, self.amplitudes[k].norm_sqr())),
        )
    }

    /// Grows the lattice so that the support widened by `reach` keeps at
    /// least one empty site on each side.
    fn ensure_room(&mut self, reach: usize) -> Result<()> {
        let need_left = (reach + 1).saturating_sub(self.lo);
        let need_right = (self.hi + reach + 2).saturating_sub(self.amplitudes.len());
        let deficit = need_left.max(need_right);
        if deficit == 0 {
            return Ok(());
        }
        // grow in whole multiples of the reach, symmetrically
        let step = reach.max(1);
        let pad = deficit.div_ceil(step) * step;
        let len = self.amplitudes.len() + 2 * pad;
        if len > MAX_SITES {
            return Err(SimError::LatticeTooLarge(len));
        }
        let mut grown = vec![Complex64::new(0.0, 0.0); len];
        grown[pad + self.lo..=pad + self.hi].copy_from_slice(&self.amplitudes[self.lo..=self.hi]);
        self.amplitudes = grown;
        self.scratch = vec![Complex64::new(0.0, 0.0); len];
        self.offset += pad;
        self.lo += pad;
        self.hi += pad;
        Ok(())
    }

    /// Applies one period `U(kappa)` of the map.
    pub fn step(&mut self, map: &RotorMap) -> Result<()> {
        let band = map.bandwidth();
        self.ensure_room(band)?;

        let (lo, hi) = (self.lo, self.hi);
        let q = map.phases.len();
        let mut residue = (lo as i64 - self.offset as i64).rem_euclid(q as i64) as usize;
        for a in &mut self.amplitudes[lo..=hi] {
            *a *= map.phases[residue];
            residue += 1;
            if residue == q {
                residue = 0;
            }
        }

        let coeffs = map.kernel.coefficients();
        let (out_lo, out_hi) = (lo - band, hi + band);
        for ell in out_lo..=out_hi {
            let j_lo = lo.max(ell.saturating_sub(band));
            let j_hi = hi.min(ell + band);
            let c_lo = j_lo + band - ell;
            let c_hi = j_hi + band - ell;
            let b = &self.amplitudes[j_lo..=j_hi];
            let c = &coeffs[c_lo..=c_hi];
            let mut acc = Complex64::new(0.0, 0.0);
            for (cm, bj) in c.iter().zip(b) {
                acc += cm * bj;
            }
            self.scratch[ell] = acc;
        }

        std::mem::swap(&mut self.amplitudes, &mut self.scratch);
        for a in &mut self.scratch[lo..=hi] {
            *a = Complex64::new(0.0, 0.0);
        }

        let mut new_lo = out_lo;
        let mut new_hi = out_hi;
        while new_lo < new_hi && self.amplitudes[new_lo].norm_sqr() < TRIM_PROBABILITY {
            self.amplitudes[new_lo] = Complex64::new(0.0, 0.0);
            new_lo += 1;
        }
        while new_hi > new_lo && self.amplitudes[new_hi].norm_sqr() < TRIM_PROBABILITY {
            self.amplitudes[new_hi] = Complex64::new(0.0, 0.0);
            new_hi -= 1;
        }
        self.lo = new_lo;
        self.hi = new_hi;
        self.time += 1;
        Ok(())
    }

    /// Text rows `ell, Re(a_ell), Im(a_ell)` over the support.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> io::Result<()> {
        for k in self.lo..=self.hi {
            let a = self.amplitudes[k];
            writeln!(
                out,
                "{}, {:.17e}, {:.17e}",
                k as i64 - self.offset as i64,
                a.re,
                a.im
            )?;
        }
        Ok(())
    }
}

/// The pair `U0 = U(kappa1)`, `U1 = U(kappa2)` of one experiment.
#[derive(Debug, Clone)]
pub struct KickedRotor {
    pub u0: RotorMap,
    pub u1: RotorMap,
}

impl KickedRotor {
    pub fn new(params: &ResonanceParams) -> Result<Self> {
        Ok(Self {
            u0: RotorMap::new(params.kappa1, params)?,
            u1: RotorMap::new(params.kappa2, params)?,
        })
    }

    /// Initial `a_0 = 1` sized to four kernel bandwidths.
    pub fn initial_state(&self) -> RotorState {
        let band = self.u0.bandwidth().max(self.u1.bandwidth());
        RotorState::position_eigenstate(4 * band)
    }
}
