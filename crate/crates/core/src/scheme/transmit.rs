//! Beamforming, power normalization and the per-user transmit signal
//! `x_k = Σ_{ℓ≤k} P^{−α_{ℓ−1}/2} v_ℓᵀ b_{k,ℓ}`.

use rand::Rng;
use serde::Serialize;

use super::constellation::Constellation;
use super::monomial::{monomial_set, DimensionSet};
use super::plan::LayerPlan;
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::link_sim::channel::ChannelRealization;

/// Plan, channel, beams and power normalizer for one run at one power.
/// Immutable once built.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub plan: LayerPlan,
    pub channel: ChannelRealization,
    v_sets: Vec<Option<DimensionSet>>,
    beams: Vec<Vec<f64>>,
    /// `η = max_k Σ_{ℓ≤k} Σ_i |v_{ℓ,i}|²` over active layers.
    pub eta: f64,
    /// `γ = 1/√η`.
    pub gamma: f64,
}

impl Scheme {
    pub fn new(channel: ChannelRealization, plan: LayerPlan) -> Result<Self> {
        let k = plan.k();
        if channel.k() != k {
            return Err(Error::ChannelSize {
                got: channel.k(),
                expected: k,
            });
        }
        let mut v_sets = Vec::with_capacity(k);
        let mut beams = Vec::with_capacity(k);
        for layer in &plan.layers {
            if !layer.active {
                v_sets.push(None);
                beams.push(Vec::new());
            } else if layer.is_alignment_layer() {
                let v = monomial_set(&channel, layer.layer, plan.n)?;
                beams.push(v.values().to_vec());
                v_sets.push(Some(v));
            } else {
                v_sets.push(None);
                beams.push(vec![1.0]);
            }
        }
        // every user shares the layer beams, so user K's total is the max
        let eta: f64 = beams.iter().flatten().map(|v| v * v).sum();
        Ok(Self {
            plan,
            channel,
            v_sets,
            beams,
            eta,
            gamma: 1.0 / eta.sqrt(),
        })
    }

    pub fn k(&self) -> usize {
        self.plan.k()
    }

    /// Beamforming values of layer ℓ; empty for an inactive layer.
    pub fn beam(&self, ell: usize) -> &[f64] {
        &self.beams[ell - 1]
    }

    pub fn v_set(&self, ell: usize) -> Option<&DimensionSet> {
        self.v_sets[ell - 1].as_ref()
    }

    /// `P^{x/2}`.
    pub fn p_half(&self, x: f64) -> f64 {
        self.plan.p_half_pow(x)
    }

    /// Constellation of the layer-ℓ symbols `b ∈ Ω(γ/Q_ℓ, Q_ℓ)`.
    pub fn constellation(&self, ell: usize) -> Constellation {
        let layer = self.plan.layer(ell);
        if layer.active {
            Constellation::new(self.gamma / layer.q_level as f64, layer.q_level)
        } else {
            Constellation::new(0.0, 0)
        }
    }

    /// Integer PAM labels for every layer of user k, uniform and independent.
    pub fn draw_symbols<R: Rng>(&self, user: usize, rng: &mut R) -> Vec<Vec<i64>> {
        (1..=user)
            .map(|ell| {
                let c = self.constellation(ell);
                self.beam(ell).iter().map(|_| c.sample_index(rng)).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmitLayer {
    pub layer: usize,
    pub active: bool,
    /// `P^{−α_{ℓ−1}/2}`.
    pub offset: f64,
    pub beam: Vec<f64>,
    pub constellation: Constellation,
}

/// Transmitter of one user.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmitConfig {
    pub user: usize,
    pub gamma: f64,
    pub layers: Vec<TransmitLayer>,
}

impl TransmitConfig {
    /// `x_k` for integer labels `symbols[ℓ−1][i]`, i.e. `b = ξ_ℓ·symbols`.
    pub fn signal(&self, symbols: &[Vec<i64>]) -> f64 {
        self.layers
            .iter()
            .zip(symbols)
            .filter(|(l, _)| l.active)
            .map(|(l, q)| {
                let dot: f64 = l.beam.iter().zip(q).map(|(v, &a)| v * l.constellation.point(a)).sum();
                l.offset * dot
            })
            .sum()
    }

    /// `E|x_k|²` under independent uniform symbols.
    pub fn analytic_power(&self) -> f64 {
        self.layers
            .iter()
            .filter(|l| l.active)
            .map(|l| {
                let energy: f64 = l.beam.iter().map(|v| v * v).sum();
                l.offset * l.offset * energy * l.constellation.average_power()
            })
            .sum()
    }
}

/// `(η, γ)` for the plan's beams on this channel.
pub fn power_normalizer(channel: &ChannelRealization, plan: &LayerPlan) -> Result<(f64, f64)> {
    let s = Scheme::new(channel.clone(), plan.clone())?;
    Ok((s.eta, s.gamma))
}

pub fn build_transmit_config(scheme: &Scheme, user: usize) -> Result<TransmitConfig> {
    let k = scheme.k();
    if user < 1 || user > k {
        return Err(Error::UserOutOfRange { user, layer: 1, k });
    }
    let layers = (1..=user)
        .map(|ell| {
            let params = scheme.plan.layer(ell);
            TransmitLayer {
                layer: ell,
                active: params.active,
                offset: scheme.p_half(-to_f64(&params.power_offset)),
                beam: scheme.beam(ell).to_vec(),
                constellation: scheme.constellation(ell),
            }
        })
        .collect();
    Ok(TransmitConfig {
        user,
        gamma: scheme.gamma,
        layers,
    })
}
