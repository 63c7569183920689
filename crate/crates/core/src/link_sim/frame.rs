//! One channel use: symbol draws, the received samples
//! `y_k = P^{α_k/2} Σ_l h_kl x_l + z_k`, and the residual interference a
//! receiver treats as noise.

use rand::Rng;
use serde::Serialize;

use super::rng::BoxMuller;
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::scheme::{build_transmit_config, Scheme, TransmitConfig};

/// Labels `symbols[k−1][ℓ−1][i]` of every user's layer-ℓ symbols.
pub type SymbolSet = Vec<Vec<Vec<i64>>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceivedFrame {
    pub y: Vec<f64>,
    /// The noiseless part of `y`.
    pub signal: Vec<f64>,
    pub noise: Vec<f64>,
    pub symbols: SymbolSet,
}

pub fn transmit_configs(scheme: &Scheme) -> Vec<TransmitConfig> {
    (1..=scheme.k())
        .map(|k| build_transmit_config(scheme, k).expect("user in range"))
        .collect()
}

/// Received samples for given labels and noise.
pub fn synthesize_frame(scheme: &Scheme, txs: &[TransmitConfig], symbols: SymbolSet, noise: Vec<f64>) -> ReceivedFrame {
    let k = scheme.k();
    let x: Vec<f64> = txs.iter().zip(&symbols).map(|(tx, s)| tx.signal(s)).collect();
    let signal: Vec<f64> = (1..=k)
        .map(|rx| {
            let sum: f64 = (1..=k).map(|j| scheme.channel.h(rx, j) * x[j - 1]).sum();
            scheme.p_half(scheme.plan.alpha.get_f64(rx)) * sum
        })
        .collect();
    let y = signal.iter().zip(&noise).map(|(s, z)| s + z).collect();
    ReceivedFrame {
        y,
        signal,
        noise,
        symbols,
    }
}

/// Uniform labels for all users and `noise_std`·N(0,1) noise per receiver.
pub fn draw_frame<R: Rng>(scheme: &Scheme, txs: &[TransmitConfig], noise_std: f64, rng: &mut R) -> ReceivedFrame {
    let symbols: SymbolSet = (1..=scheme.k()).map(|k| scheme.draw_symbols(k, rng)).collect();
    let mut gauss = BoxMuller::default();
    let noise = (0..scheme.k()).map(|_| noise_std * gauss.sample(rng)).collect();
    synthesize_frame(scheme, txs, symbols, noise)
}

/// Realized `T_{k,ℓ}`: everything receiver k sees from layers above ℓ.
pub fn residual_interference(scheme: &Scheme, user: usize, ell: usize, symbols: &SymbolSet) -> f64 {
    let k = scheme.k();
    let alpha = &scheme.plan.alpha;
    let mut total = 0.0;
    for l in ell + 1..=k {
        let params = scheme.plan.layer(l);
        if !params.active {
            continue;
        }
        let amp = scheme.p_half(alpha.get_f64(user) - to_f64(&params.power_offset));
        let c = scheme.constellation(l);
        for j in l..=k {
            let dot: f64 = scheme
                .beam(l)
                .iter()
                .zip(&symbols[j - 1][l - 1])
                .map(|(v, &q)| v * c.point(q))
                .sum();
            total += amp * scheme.channel.h(user, j) * dot;
        }
    }
    total
}

/// Deterministic bound on `|T_{k,ℓ}|`:
/// `P^{(α_k−α_ℓ)/2} · γ Σ_{l>ℓ} Σ_{j≥l} Σ_i |h_kj||v_{l,i}|`.
pub fn t_bound(scheme: &Scheme, user: usize, ell: usize) -> Result<f64> {
    let k = scheme.k();
    if ell < 1 || ell > k {
        return Err(Error::LayerOutOfRange { layer: ell, k });
    }
    if user < ell || user > k {
        return Err(Error::UserOutOfRange { user, layer: ell, k });
    }
    let mut delta = 0.0;
    for l in ell + 1..=k {
        let beam_l1: f64 = scheme.beam(l).iter().map(|v| v.abs()).sum();
        let gains: f64 = (l..=k).map(|j| scheme.channel.h(user, j).abs()).sum();
        delta += gains * beam_l1;
    }
    let alpha = &scheme.plan.alpha;
    Ok(scheme.p_half(alpha.get_f64(user) - alpha.get_f64(ell)) * scheme.gamma * delta)
}
