//! What receiver k sees of layer ℓ: the dimension values carrying the
//! layer's symbols, the integer range of each coefficient, and how each
//! transmitter's beam entries land on those dimensions.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::scheme::monomial::{desired_from, interference_from};
use crate::scheme::{LayerPlan, Scheme};

/// Where transmitter `transmitter`'s beam entry i lands: dimension `targets[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Route {
    pub transmitter: usize,
    pub targets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerCodebook {
    pub user: usize,
    pub layer: usize,
    pub active: bool,
    /// Desired dimensions first, then the aligned interference dimensions.
    pub values: Vec<f64>,
    /// Coefficient `i` ranges over `[−ranges[i], ranges[i]]`.
    pub ranges: Vec<i64>,
    pub n_desired: usize,
    /// `γ·P^{(α_k−α_{ℓ−1})/2}/Q_ℓ`: the received amplitude of a unit label.
    pub scale: f64,
    pub routes: Vec<Route>,
}

impl LayerCodebook {
    fn inactive(user: usize, layer: usize) -> Self {
        Self {
            user,
            layer,
            active: false,
            values: Vec::new(),
            ranges: Vec::new(),
            n_desired: 0,
            scale: 0.0,
            routes: Vec::new(),
        }
    }

    pub fn dims(&self) -> usize {
        self.values.len()
    }

    /// Own symbols and aggregated interference labels of a decision.
    pub fn split<'a>(&self, decision: &'a [i64]) -> (&'a [i64], &'a [i64]) {
        decision.split_at(self.n_desired)
    }

    /// `scale · Σ values_i · decision_i`, summed in dimension order.
    pub fn reconstruct(&self, decision: &[i64]) -> f64 {
        let mut s = 0.0;
        for (v, &q) in self.values.iter().zip(decision) {
            s += v * q as f64;
        }
        self.scale * s
    }

    /// Decision labels the receiver would ideally produce:
    /// the own symbols and, per interference dimension, the sum of the
    /// labels aligned onto it. `symbols[j−1][ℓ−1]` are user j's labels.
    pub fn true_decision(&self, symbols: &[Vec<Vec<i64>>]) -> Vec<i64> {
        let mut out = vec![0i64; self.dims()];
        for route in &self.routes {
            let labels = &symbols[route.transmitter - 1][self.layer - 1];
            for (&t, &q) in route.targets.iter().zip(labels) {
                out[t] += q;
            }
        }
        out
    }

    /// Number of candidate decisions, `Π (2r_i + 1)`.
    pub fn decision_space(&self) -> f64 {
        self.ranges.iter().map(|&r| (2 * r + 1) as f64).product()
    }

    /// Number of difference vectors, `Π (4r_i + 1)`.
    pub fn difference_space(&self) -> f64 {
        self.ranges.iter().map(|&r| (4 * r + 1) as f64).product()
    }
}

/// Layers `1..=k` as seen by receiver k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiverCodebooks {
    pub user: usize,
    pub layers: Vec<LayerCodebook>,
}

impl ReceiverCodebooks {
    pub fn layer(&self, ell: usize) -> &LayerCodebook {
        &self.layers[ell - 1]
    }
}

/// Log10 of the decision-space size of layer ℓ, from the plan alone, so
/// it can be checked before any set is materialized.
pub fn log10_decision_space(plan: &LayerPlan, ell: usize) -> f64 {
    let p = plan.layer(ell);
    if !p.active {
        return 0.0;
    }
    let k = plan.k();
    let q = p.q_level as f64;
    if let Some(m) = &p.m_dims {
        let n = p.n_dims.to_f64().unwrap_or(f64::INFINITY);
        let extra = (m - &p.n_dims).to_f64().unwrap_or(f64::INFINITY);
        n * (2.0 * q + 1.0).log10() + extra * (2.0 * p.k_users as f64 * q + 1.0).log10()
    } else if ell + 1 == k {
        2.0 * (2.0 * q + 1.0).log10()
    } else {
        (2.0 * q + 1.0).log10()
    }
}

/// Fails with [`Error::EnumerationCap`] if some layer receiver `user`
/// decodes would need more than `cap` candidate decisions.
pub fn check_decode_cap(plan: &LayerPlan, user: usize, cap: f64) -> Result<()> {
    for ell in 1..=user {
        let log = log10_decision_space(plan, ell);
        if log > cap.log10() {
            return Err(Error::EnumerationCap {
                user,
                layer: ell,
                log10_size: log,
                cap,
            });
        }
    }
    Ok(())
}

/// Builds the codebook of layer ℓ at receiver k.
pub fn layer_codebook(scheme: &Scheme, user: usize, ell: usize) -> Result<LayerCodebook> {
    let k = scheme.k();
    if ell < 1 || ell > k {
        return Err(Error::LayerOutOfRange { layer: ell, k });
    }
    if user < ell || user > k {
        return Err(Error::UserOutOfRange { user, layer: ell, k });
    }
    let params = scheme.plan.layer(ell);
    if !params.active {
        return Ok(LayerCodebook::inactive(user, ell));
    }
    let q = params.q_level as i64;
    let alpha = &scheme.plan.alpha;
    let scale = scheme.gamma * scheme.p_half(alpha.get_f64(user) - to_f64(&params.power_offset)) / q as f64;
    let ch = &scheme.channel;

    if let Some(v) = scheme.v_set(ell) {
        let s = desired_from(ch, v, user);
        let i = interference_from(ch, v, user, scheme.plan.n)?;
        let n_desired = s.len();
        let mut values = s.values().to_vec();
        values.extend_from_slice(i.values());
        let mut ranges = vec![q; n_desired];
        ranges.extend(std::iter::repeat_n(params.k_users as i64 * q, i.len()));

        let mut routes = vec![Route {
            transmitter: user,
            targets: (0..n_desired).collect(),
        }];
        let mut row = Vec::with_capacity(v.support().len());
        for j in (ell..=k).filter(|&j| j != user) {
            let col = v
                .support()
                .iter()
                .position(|&c| c == (user, j))
                .expect("cross pair present");
            let targets = (0..v.len())
                .map(|idx| {
                    row.clear();
                    row.extend_from_slice(v.row(idx));
                    row[col] += 1;
                    let pos = i.position(&row).expect("aligned interference lands in I");
                    n_desired + pos
                })
                .collect();
            routes.push(Route {
                transmitter: j,
                targets,
            });
        }
        routes.sort_by_key(|r| r.transmitter);
        return Ok(LayerCodebook {
            user,
            layer: ell,
            active: true,
            values,
            ranges,
            n_desired,
            scale,
            routes,
        });
    }

    // the last two layers: one symbol per user
    let mut values = vec![ch.h(user, user)];
    let mut routes = vec![Route {
        transmitter: user,
        targets: vec![0],
    }];
    if ell + 1 == k {
        let other = if user == k { k - 1 } else { k };
        values.push(ch.h(user, other));
        routes.push(Route {
            transmitter: other,
            targets: vec![1],
        });
        routes.sort_by_key(|r| r.transmitter);
    }
    Ok(LayerCodebook {
        user,
        layer: ell,
        active: true,
        ranges: vec![q; values.len()],
        values,
        n_desired: 1,
        scale,
        routes,
    })
}

pub fn receiver_codebooks(scheme: &Scheme, user: usize) -> Result<ReceiverCodebooks> {
    let layers = (1..=user)
        .map(|ell| layer_codebook(scheme, user, ell))
        .collect::<Result<_>>()?;
    Ok(ReceiverCodebooks { user, layers })
}

/// Codebooks of every receiver, after checking the decode cap.
pub fn all_receivers(scheme: &Scheme, cap: f64) -> Result<Vec<ReceiverCodebooks>> {
    (1..=scheme.k())
        .map(|k| {
            check_decode_cap(&scheme.plan, k, cap)?;
            receiver_codebooks(scheme, k)
        })
        .collect()
}
