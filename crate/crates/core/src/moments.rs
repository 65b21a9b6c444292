use serde::{Deserialize, Serialize};

/// Even moments `m_k = sum_x x^k P(x)` of a lattice distribution.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Moments {
    pub m2: f64,
    pub m4: f64,
    pub m6: f64,
}

impl Moments {
    pub fn accumulate<I: IntoIterator<Item = (i64, f64)>>(points: I) -> Self {
        let mut m = Moments::default();
        for (x, prob) in points {
            let x2 = (x * x) as f64;
            let w2 = x2 * prob;
            m.m2 += w2;
            m.m4 += w2 * x2;
            m.m6 += w2 * x2 * x2;
        }
        m
    }

    /// Standard deviation about the origin, `sqrt(m2)`.
    pub fn sigma(&self) -> f64 {
        self.m2.sqrt()
    }
}
