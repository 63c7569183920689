//! Seeded Monte Carlo sweeps of successive decoding over a power grid.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::{sample_channel, ChannelRealization, DEFAULT_H_MAX, DEFAULT_H_MIN};
use super::codebook::{all_receivers, ReceiverCodebooks};
use super::decode::dmin_bruteforce;
use super::frame::{draw_frame, t_bound, transmit_configs};
use super::receiver::successive_decode;
use super::rng::{derive_seed, seeded};
use crate::alpha::AlphaProfile;
use crate::error::{Error, Result};
use crate::exact::{format_rational, serde_opt_rational};
use crate::scheme::{build_layer_plan, Scheme};
use crate::SCHEMA_VERSION;

const CHANNEL_STREAM: u64 = 0;
const TRIAL_STREAM: u64 = 1;

pub const DEFAULT_CAP: f64 = 1e7;
pub const DEFAULT_RELIABILITY: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub alpha: AlphaProfile,
    pub n: u64,
    /// Rate backoff; the plan's default when absent.
    #[serde(with = "serde_opt_rational")]
    pub eps: Option<BigRational>,
    pub powers: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub h_min: f64,
    pub h_max: f64,
    /// Standard deviation of the receiver noise.
    pub noise_std: f64,
    /// A cell counts toward the GDoF estimate when its SER is below this.
    pub reliability: f64,
    /// Largest decision space any layer decoder may enumerate.
    pub cap: f64,
}

impl SimConfig {
    pub fn new(alpha: AlphaProfile, n: u64, powers: Vec<f64>, trials: u64, seed: u64) -> Self {
        Self {
            alpha,
            n,
            eps: None,
            powers,
            trials,
            seed,
            h_min: DEFAULT_H_MIN,
            h_max: DEFAULT_H_MAX,
            noise_std: 1.0,
            reliability: DEFAULT_RELIABILITY,
            cap: DEFAULT_CAP,
        }
    }

    /// The channel every power point of the run uses.
    pub fn channel(&self) -> Result<ChannelRealization> {
        sample_channel(
            self.alpha.k(),
            self.h_min,
            self.h_max,
            derive_seed(self.seed, &[CHANNEL_STREAM]),
        )
    }

    /// Checks everything that can be checked before simulating, including
    /// the decode cap at every power.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidN);
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::Config(format!(
                "noise_std must be finite and >= 0 (got {})",
                self.noise_std
            )));
        }
        if !(self.reliability > 0.0 && self.reliability <= 1.0) {
            return Err(Error::Config(format!(
                "reliability must lie in (0, 1] (got {})",
                self.reliability
            )));
        }
        if self.cap.is_nan() || self.cap < 1.0 {
            return Err(Error::Config(format!("cap must be >= 1 (got {})", self.cap)));
        }
        self.channel()?;
        for &p in &self.powers {
            let plan = build_layer_plan(&self.alpha, self.n, self.eps.as_ref(), p)?;
            for k in 1..=self.alpha.k() {
                super::codebook::check_decode_cap(&plan, k, self.cap)?;
            }
        }
        Ok(())
    }
}

/// Statistics of receiver `user` decoding its own layer-`layer` symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub user: usize,
    pub layer: usize,
    pub q_level: u64,
    pub n_dims: u64,
    /// Own symbols decoded (frames × `n_dims`).
    pub trials: u64,
    pub symbol_errors: u64,
    pub ser: f64,
    /// Frames where the whole layer decision, aggregated labels included, was wrong.
    pub frame_errors: u64,
    /// `None` when the difference space exceeds the cap.
    pub dmin: Option<f64>,
    pub tbound: f64,
    /// `n_dims · log2(1 + 2Q)`.
    pub rate_bits: f64,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub power: f64,
    pub eta: f64,
    pub gamma: f64,
    pub cells: Vec<CellReport>,
    /// Sum of `rate_bits` over reliable cells.
    pub reliable_bits: f64,
    /// `reliable_bits / (½ log2 P)`; absent at `P = 1`.
    pub gdof_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub schema: String,
    pub config: SimConfig,
    /// The ε actually used.
    pub eps: String,
    pub channel: ChannelRealization,
    pub points: Vec<PowerPoint>,
}

/// One row of the SER-vs-P table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SerRow {
    pub power: f64,
    pub user: usize,
    pub layer: usize,
    pub trials: u64,
    pub errors: u64,
    pub ser: f64,
    pub dmin: Option<f64>,
    pub tbound: f64,
}

impl SimReport {
    pub fn ser_rows(&self) -> Vec<SerRow> {
        self.points
            .iter()
            .flat_map(|p| {
                p.cells.iter().map(move |c| SerRow {
                    power: p.power,
                    user: c.user,
                    layer: c.layer,
                    trials: c.trials,
                    errors: c.symbol_errors,
                    ser: c.ser,
                    dmin: c.dmin,
                    tbound: c.tbound,
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone)]
struct Counts {
    symbol_errors: Vec<u64>,
    frame_errors: Vec<u64>,
}

impl Counts {
    fn zero(cells: usize) -> Self {
        Self {
            symbol_errors: vec![0; cells],
            frame_errors: vec![0; cells],
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        for (a, b) in self.symbol_errors.iter_mut().zip(other.symbol_errors) {
            *a += b;
        }
        for (a, b) in self.frame_errors.iter_mut().zip(other.frame_errors) {
            *a += b;
        }
        self
    }
}

/// Active (receiver, layer) cells in report order.
fn cells(receivers: &[ReceiverCodebooks]) -> Vec<(usize, usize)> {
    receivers
        .iter()
        .flat_map(|rx| rx.layers.iter().filter(|cb| cb.active).map(|cb| (cb.user, cb.layer)))
        .collect()
}

fn simulate_point(config: &SimConfig, channel: &ChannelRealization, p_index: usize, power: f64) -> Result<PowerPoint> {
    let plan = build_layer_plan(&config.alpha, config.n, config.eps.as_ref(), power)?;
    let scheme = Scheme::new(channel.clone(), plan)?;
    let receivers = all_receivers(&scheme, config.cap)?;
    let txs = transmit_configs(&scheme);
    let cell_ids = cells(&receivers);
    let slot = |k: usize, l: usize| cell_ids.iter().position(|&c| c == (k, l)).expect("active cell");

    let counts = (0..config.trials)
        .into_par_iter()
        .map(|t| -> Result<Counts> {
            let mut rng = seeded(derive_seed(config.seed, &[TRIAL_STREAM, p_index as u64, t]));
            let frame = draw_frame(&scheme, &txs, config.noise_std, &mut rng);
            let outcome = successive_decode(&frame, &receivers, config.cap)?;
            let mut c = Counts::zero(cell_ids.len());
            for (rx, layers) in receivers.iter().zip(&outcome.receivers) {
                for lo in layers.iter().filter(|lo| rx.layer(lo.layer).active) {
                    let i = slot(rx.user, lo.layer);
                    c.symbol_errors[i] += lo.desired_errors as u64;
                    c.frame_errors[i] += u64::from(!lo.correct);
                }
            }
            Ok(c)
        })
        .try_reduce(|| Counts::zero(cell_ids.len()), |a, b| Ok(a.merge(b)))?;

    let mut report_cells = Vec::with_capacity(cell_ids.len());
    for (i, &(k, l)) in cell_ids.iter().enumerate() {
        let cb = receivers[k - 1].layer(l);
        let params = scheme.plan.layer(l);
        let n_dims = cb.n_desired as u64;
        let trials = config.trials * n_dims;
        let ser = counts.symbol_errors[i] as f64 / trials as f64;
        let dmin = if cb.difference_space() <= config.cap {
            Some(dmin_bruteforce(cb, config.cap)?)
        } else {
            None
        };
        report_cells.push(CellReport {
            user: k,
            layer: l,
            q_level: params.q_level,
            n_dims,
            trials,
            symbol_errors: counts.symbol_errors[i],
            ser,
            frame_errors: counts.frame_errors[i],
            dmin,
            tbound: t_bound(&scheme, k, l)?,
            rate_bits: n_dims as f64 * (1.0 + 2.0 * params.q_level as f64).log2(),
            reliable: ser < config.reliability,
        });
    }
    let reliable_bits: f64 = report_cells.iter().filter(|c| c.reliable).map(|c| c.rate_bits).sum();
    let gdof_estimate = (power > 1.0).then(|| reliable_bits / (0.5 * power.log2()));
    Ok(PowerPoint {
        power,
        eta: scheme.eta,
        gamma: scheme.gamma,
        cells: report_cells,
        reliable_bits,
        gdof_estimate,
    })
}

/// Runs `config.trials` frames at every power of the grid on one seeded
/// channel. Fully determined by the config: trial `t` at power index `i`
/// draws from its own derived seed and counters merge by addition.
pub fn run_monte_carlo(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let channel = config.channel()?;
    let eps = match &config.eps {
        Some(e) => e.clone(),
        None => crate::scheme::default_eps(&config.alpha, config.n),
    };
    let points = if config.trials == 0 {
        Vec::new()
    } else {
        config
            .powers
            .iter()
            .enumerate()
            .map(|(i, &p)| simulate_point(config, &channel, i, p))
            .collect::<Result<_>>()?
    };
    Ok(SimReport {
        schema: SCHEMA_VERSION.to_string(),
        config: config.clone(),
        eps: format_rational(&eps),
        channel,
        points,
    })
}
