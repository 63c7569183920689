use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::seeded;
use crate::error::{Error, Result};

pub const DEFAULT_H_MIN: f64 = 0.5;
pub const DEFAULT_H_MAX: f64 = 2.0;

/// Real K×K channel matrix; `h(k, l)` is the gain from transmitter l to
/// receiver k (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    k: usize,
    /// Row-major, receiver-indexed rows.
    h: Vec<f64>,
    pub h_min: f64,
    pub h_max: f64,
    pub seed: u64,
}

impl ChannelRealization {
    /// Wraps an explicit matrix. The magnitude bounds are taken from the
    /// entries themselves.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k < 2 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Config("channel matrix must be square with K >= 2".into()));
        }
        let h: Vec<f64> = rows.into_iter().flatten().collect();
        if h.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::Config("channel coefficients must be finite and nonzero".into()));
        }
        let h_min = h.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let h_max = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            k,
            h,
            h_min,
            h_max,
            seed: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self, receiver: usize, transmitter: usize) -> f64 {
        self.h[(receiver - 1) * self.k + transmitter - 1]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.h.chunks(self.k).map(|r| r.to_vec()).collect()
    }
}

/// Draws every `|h_kl|` uniformly on `[h_min, h_max]` with an independent
/// fair sign. Deterministic in `seed`.
pub fn sample_channel(k: usize, h_min: f64, h_max: f64, seed: u64) -> Result<ChannelRealization> {
    if !(h_min > 0.0 && h_min < h_max && h_max.is_finite()) {
        return Err(Error::ChannelBounds { h_min, h_max });
    }
    if k < 2 {
        return Err(Error::Config(format!("need K >= 2 users, got {k}")));
    }
    let mut rng = seeded(seed);
    let h = (0..k * k)
        .map(|_| {
            let mag = rng.random_range(h_min..=h_max);
            if rng.random::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect();
    Ok(ChannelRealization {
        k,
        h,
        h_min,
        h_max,
        seed,
    })
}
