//! Minimum distances and residual-interference bounds over a power sweep.

use num_rational::BigRational;
use serde::Serialize;

use super::channel::ChannelRealization;
use super::codebook::receiver_codebooks;
use super::decode::dmin_bruteforce;
use super::frame::t_bound;
use crate::alpha::AlphaProfile;
use crate::error::Result;
use crate::scheme::{build_layer_plan, Scheme};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub power: f64,
    pub user: usize,
    pub layer: usize,
    pub dmin: f64,
    pub tbound: f64,
}

impl DistanceRow {
    /// Noise-free decoding of this layer is guaranteed: `t_bound < d_min/2`.
    pub fn separated(&self) -> bool {
        self.tbound < self.dmin / 2.0
    }
}

/// `d_min` and `t_bound` of every active (receiver, layer) cell.
pub fn cell_distances(scheme: &Scheme, cap: f64) -> Result<Vec<DistanceRow>> {
    let mut rows = Vec::new();
    for k in 1..=scheme.k() {
        let rx = receiver_codebooks(scheme, k)?;
        for cb in rx.layers.iter().filter(|cb| cb.active) {
            rows.push(DistanceRow {
                power: scheme.plan.power,
                user: k,
                layer: cb.layer,
                dmin: dmin_bruteforce(cb, cap)?,
                tbound: t_bound(scheme, k, cb.layer)?,
            });
        }
    }
    Ok(rows)
}

/// [`cell_distances`] at every power of `powers`, on one channel.
pub fn sweep_distances(
    channel: &ChannelRealization,
    alpha: &AlphaProfile,
    n: u64,
    eps: Option<&BigRational>,
    powers: &[f64],
    cap: f64,
) -> Result<Vec<DistanceRow>> {
    let mut rows = Vec::new();
    for &p in powers {
        let plan = build_layer_plan(alpha, n, eps, p)?;
        let scheme = Scheme::new(channel.clone(), plan)?;
        rows.extend(cell_distances(&scheme, cap)?);
    }
    Ok(rows)
}

/// Smallest swept power from which every cell at every higher swept power
/// is [separated](DistanceRow::separated). `None` if the top of the sweep
/// is not.
pub fn noiseless_threshold(rows: &[DistanceRow]) -> Option<f64> {
    let mut powers: Vec<f64> = rows.iter().map(|r| r.power).collect();
    powers.sort_by(f64::total_cmp);
    powers.dedup();
    let mut threshold = None;
    for &p in powers.iter().rev() {
        if rows.iter().filter(|r| r.power == p).all(DistanceRow::separated) {
            threshold = Some(p);
        } else {
            break;
        }
    }
    threshold
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
