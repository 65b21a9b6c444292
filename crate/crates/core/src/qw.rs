//! Coined quantum walk on the line with a per-step choice of coin.
//!
//! One step applies `K(theta) = sigma_z exp(-i theta sigma_y)` to the
//! chirality of every site and then moves the left component one site left
//! and the right component one site right.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::moments::Moments;

/// Edge sites below this probability are dropped from the support.
const TRIM_PROBABILITY: f64 = 1e-40;

/// `K(theta) = [[cos, -sin], [-sin, -cos]]` acting on `(left, right)`.
///
/// The coin is real for real `theta`, so entries are stored as `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin {
    pub matrix: [[f64; 2]; 2],
    pub theta: f64,
}

pub fn coin_matrix(theta: f64) -> Result<Coin> {
    if !theta.is_finite() {
        return Err(SimError::NonFiniteAngle(theta));
    }
    let (s, c) = theta.sin_cos();
    Ok(Coin {
        matrix: [[c, -s], [-s, -c]],
        theta,
    })
}

impl Coin {
    #[inline]
    pub fn apply(&self, left: Complex64, right: Complex64) -> (Complex64, Complex64) {
        let [[a, b], [c, d]] = self.matrix;
        (left * a + right * b, left * c + right * d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    /// `(1, 0)`: pure left chirality.
    #[default]
    Plus,
    /// `(1, i) / sqrt 2`.
    Symmetric,
}

impl Chirality {
    pub fn components(self) -> (Complex64, Complex64) {
        match self {
            Chirality::Plus => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Chirality::Symmetric => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (Complex64::new(h, 0.0), Complex64::new(0.0, h))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub theta1: f64,
    pub theta2: f64,
    #[serde(default)]
    pub initial_chirality: Chirality,
}

impl CoinParams {
    pub fn new(theta1: f64, theta2: f64, initial_chirality: Chirality) -> Result<Self> {
        let params = Self {
            theta1,
            theta2,
            initial_chirality,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for t in [self.theta1, self.theta2] {
            if !t.is_finite() {
                return Err(SimError::NonFiniteAngle(t));
            }
        }
        Ok(())
    }
}

/// Walker amplitudes `a_i` (left) and `b_i` (right) on sites `[-L, L]`.
#[derive(Debug, Clone)]
pub struct WalkerState {
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    next_left: Vec<Complex64>,
    next_right: Vec<Complex64>,
    offset: usize,
    /// Inclusive support; both ends share the parity of `time`.
    lo: usize,
    hi: usize,
    time: u64,
}

impl WalkerState {
    /// Walker at the origin with the given chirality, with room for
    /// `capacity` steps before any reallocation.
    pub fn at_origin(chirality: Chirality, capacity: usize) -> Self {
        let (a, b) = chirality.components();
        Self::from_origin_components(a, b, capacity)
    }

    pub fn from_origin_components(a: Complex64, b: Complex64, capacity: usize) -> Self {
        let half = capacity.max(1);
        let zeros = vec![Complex64::new(0.0, 0.0); 2 * half + 1];
        let mut left = zeros.clone();
        let mut right = zeros.clone();
        left[half] = a;
        right[half] = b;
        Self {
            left,
            right,
            next_left: zeros.clone(),
            next_right: zeros,
            offset: half,
            lo: half,
            hi: half,
            time: 0,
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn half_width(&self) -> usize {
        self.offset
    }

    /// `(a_i, b_i)`, zero off the lattice.
    pub fn amplitude(&self, site: i64) -> (Complex64, Complex64) {
        let idx = site + self.offset as i64;
        if idx < 0 || idx as usize >= self.left.len() {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (self.left[idx as usize], self.right[idx as usize])
        }
    }

    /// Smallest and largest site that may carry amplitude. Always inside the
    /// light cone `[-t, t]`.
    pub fn support(&self) -> (i64, i64) {
        let off = self.offset as i64;
        (self.lo as i64 - off, self.hi as i64 - off)
    }

    /// `P(i) = |a_i|^2 + |b_i|^2` over the support.
    pub fn site_probabilities(&self) -> Vec<(i64, f64)> {
        (self.lo..=self.hi)
            .map(|k| {
                (
                    k as i64 - self.offset as i64,
                    self.left[k].norm_sqr() + self.right[k].norm_sqr(),
                )
            })
            .collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.site_probabilities().iter().map(|(_, p)| p).sum()
    }

    pub fn moments(&self) -> Moments {
        let (lo, hi) = (self.lo, self.hi);
        let off = self.offset as i64;
        // only sites with the parity of t are ever occupied
        Moments::accumulate((lo..=hi).step_by(2).map(|k| {
            (
                k as i64 - off,
                self.left[k].norm_sqr() + self.right[k].norm_sqr(),
            )
        }))
    }

    fn grow(&mut self) {
        let pad = self.offset.max(16);
        let len = self.left.len() + 2 * pad;
        let zeros = vec![Complex64::new(0.0, 0.0); len];
        let mut left = zeros.clone();
        let mut right = zeros.clone();
        left[pad..pad + self.left.len()].copy_from_slice(&self.left);
        right[pad..pad + self.right.len()].copy_from_slice(&self.right);
        self.left = left;
        self.right = right;
        self.next_left = zeros.clone();
        self.next_right = zeros;
        self.offset += pad;
        self.lo += pad;
        self.hi += pad;
    }

    /// One coin-then-shift step.
    pub fn step(&mut self, coin: &Coin) {
        if self.lo == 0 || self.hi + 1 >= self.left.len() {
            self.grow();
        }
        let (lo, hi) = (self.lo, self.hi);
        // Occupied sites share the parity of t. Every target of the other
        // parity receives exactly one left mover (from its right neighbour)
        // and one right mover (from its left neighbour), except the two ends.
        self.next_left[hi + 1] = Complex64::new(0.0, 0.0);
        self.next_right[lo - 1] = Complex64::new(0.0, 0.0);
        let sources = self.left[lo..=hi]
            .iter()
            .step_by(2)
            .zip(self.right[lo..=hi].iter().step_by(2));
        let targets = self.next_left[lo - 1..hi]
            .iter_mut()
            .step_by(2)
            .zip(self.next_right[lo + 1..=hi + 1].iter_mut().step_by(2));
        for ((&a, &b), (to_left, to_right)) in sources.zip(targets) {
            let (a, b) = coin.apply(a, b);
            *to_left = a;
            *to_right = b;
        }
        std::mem::swap(&mut self.left, &mut self.next_left);
        std::mem::swap(&mut self.right, &mut self.next_right);
        self.next_left[lo..=hi].fill(Complex64::new(0.0, 0.0));
        self.next_right[lo..=hi].fill(Complex64::new(0.0, 0.0));

        let prob = |w: &Self, k: usize| w.left[k].norm_sqr() + w.right[k].norm_sqr();
        let (mut lo, mut hi) = (lo - 1, hi + 1);
        while lo + 2 <= hi && prob(self, lo) < TRIM_PROBABILITY {
            self.left[lo] = Complex64::new(0.0, 0.0);
            self.right[lo] = Complex64::new(0.0, 0.0);
            lo += 2;
        }
        while hi >= lo + 2 && prob(self, hi) < TRIM_PROBABILITY {
            self.left[hi] = Complex64::new(0.0, 0.0);
            self.right[hi] = Complex64::new(0.0, 0.0);
            hi -= 2;
        }
        self.lo = lo;
        self.hi = hi;
        self.time += 1;
    }

    /// Text rows `i, Re(a_i), Im(a_i), Re(b_i), Im(b_i)` over the support.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (lo, hi) = (self.lo, self.hi);
        for k in lo..=hi {
            let (a, b) = (self.left[k], self.right[k]);
            writeln!(
                out,
                "{}, {:.17e}, {:.17e}, {:.17e}, {:.17e}",
                k as i64 - self.offset as i64,
                a.re,
                a.im,
                b.re,
                b.im
            )?;
        }
        Ok(())
    }
}

/// The pair `U0 = U(theta1)`, `U1 = U(theta2)` of one experiment.
#[derive(Debug, Clone)]
pub struct CoinedWalk {
    pub u0: Coin,
    pub u1: Coin,
    pub chirality: Chirality,
}

impl CoinedWalk {
    pub fn new(params: &CoinParams) -> Result<Self> {
        Ok(Self {
            u0: coin_matrix(params.theta1)?,
            u1: coin_matrix(params.theta2)?,
            chirality: params.initial_chirality,
        })
    }
}
