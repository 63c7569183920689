//! Layer-peeling successive decoding at each receiver.

use serde::Serialize;

use super::codebook::ReceiverCodebooks;
use super::decode::decode_layer;
use super::frame::ReceivedFrame;
use crate::error::{Error, Result};

/// `y_k` minus the reconstruction of the already decoded layers `1..ℓ`.
pub fn layer_observation(y: f64, history: &[Vec<i64>], rx: &ReceiverCodebooks, ell: usize) -> Result<f64> {
    if ell < 1 || ell > rx.layers.len() {
        return Err(Error::LayerOutOfRange {
            layer: ell,
            k: rx.layers.len(),
        });
    }
    if history.len() < ell - 1 {
        return Err(Error::MissingHistory {
            user: rx.user,
            layer: ell,
            have: history.len(),
            need: ell - 1,
        });
    }
    let mut obs = y;
    for (cb, decision) in rx.layers[..ell - 1].iter().zip(history) {
        obs -= cb.reconstruct(decision);
    }
    Ok(obs)
}

/// One receiver part-way through peeling its layers.
#[derive(Debug, Clone)]
pub struct ReceiverState<'a> {
    rx: &'a ReceiverCodebooks,
    y: f64,
    cap: f64,
    history: Vec<Vec<i64>>,
}

impl<'a> ReceiverState<'a> {
    pub fn new(rx: &'a ReceiverCodebooks, y: f64, cap: f64) -> Self {
        Self {
            rx,
            y,
            cap,
            history: Vec::with_capacity(rx.layers.len()),
        }
    }

    /// The layer the next [`step`](Self::step) decodes.
    pub fn next_layer(&self) -> Option<usize> {
        let l = self.history.len() + 1;
        (l <= self.rx.layers.len()).then_some(l)
    }

    /// Decodes the next layer against the current history.
    pub fn step(&mut self) -> Result<Option<&[i64]>> {
        let Some(ell) = self.next_layer() else {
            return Ok(None);
        };
        let obs = layer_observation(self.y, &self.history, self.rx, ell)?;
        let decision = decode_layer(obs, self.rx.layer(ell), self.cap)?;
        self.history.push(decision);
        Ok(self.history.last().map(Vec::as_slice))
    }

    pub fn run(mut self) -> Result<Vec<Vec<i64>>> {
        while self.step()?.is_some() {}
        Ok(self.history)
    }

    pub fn history(&self) -> &[Vec<i64>] {
        &self.history
    }

    /// Decisions so far, editable (e.g. to inject an error).
    pub fn history_mut(&mut self) -> &mut Vec<Vec<i64>> {
        &mut self.history
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerOutcome {
    pub layer: usize,
    pub decision: Vec<i64>,
    pub truth: Vec<i64>,
    /// Own symbols decoded wrongly.
    pub desired_errors: usize,
    /// Own symbols and every aggregated interference label correct.
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeOutcome {
    /// `receivers[k−1][ℓ−1]`.
    pub receivers: Vec<Vec<LayerOutcome>>,
}

impl DecodeOutcome {
    pub fn all_correct(&self) -> bool {
        self.receivers.iter().flatten().all(|l| l.correct)
    }
}

/// Compares a receiver's decisions with the frame's truth.
pub fn score(rx: &ReceiverCodebooks, history: &[Vec<i64>], frame: &ReceivedFrame) -> Vec<LayerOutcome> {
    rx.layers
        .iter()
        .zip(history)
        .map(|(cb, decision)| {
            let truth = cb.true_decision(&frame.symbols);
            let (dq, _) = cb.split(decision);
            let (tq, _) = cb.split(&truth);
            let desired_errors = dq.iter().zip(tq).filter(|(a, b)| a != b).count();
            LayerOutcome {
                layer: cb.layer,
                correct: *decision == truth,
                decision: decision.clone(),
                truth,
                desired_errors,
            }
        })
        .collect()
}

/// Peels every receiver's layers in order, from layer 1 up to its own.
pub fn successive_decode(frame: &ReceivedFrame, receivers: &[ReceiverCodebooks], cap: f64) -> Result<DecodeOutcome> {
    let receivers = receivers
        .iter()
        .map(|rx| {
            let history = ReceiverState::new(rx, frame.y[rx.user - 1], cap).run()?;
            Ok(score(rx, &history, frame))
        })
        .collect::<Result<_>>()?;
    Ok(DecodeOutcome { receivers })
}
