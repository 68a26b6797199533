//! Title-conditioned attention GRU producing the task embedding.
//!
//! Two GRUs read the title and the content. Every content step attends over
//! the title states; the final attention summary and the last content state
//! are merged, projected to a 128-d task embedding and fed to a sigmoid
//! output trained with binary cross-entropy.

mod attention;
mod gru;
mod network;
mod optim;

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::features::{WordVectors, TASK_EMBEDDING_DIM};
use crate::{Error, Result};

pub use attention::{Attention, AttentionTrace};
pub use gru::{GruCell, GruStep, GruTrace};
pub use network::{
    batch_gradients, bce_from_logit, encode, forward, task_embedding, EncodedPair, ForwardTrace, NetworkParams, Slot,
};
pub use optim::{Optimizer, OptimizerKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub seq_len: usize,
    pub word_dim: usize,
    pub hidden: usize,
    pub attention_dim: usize,
    pub task_dim: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            seq_len: 50,
            word_dim: 300,
            hidden: 128,
            attention_dim: 128,
            task_dim: TASK_EMBEDDING_DIM,
            epochs: 20,
            batch_size: 32,
            learning_rate: 0.001,
            optimizer: OptimizerKind::RmsProp,
            seed: 0,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("seq_len", self.seq_len),
            ("word_dim", self.word_dim),
            ("hidden", self.hidden),
            ("attention_dim", self.attention_dim),
            ("task_dim", self.task_dim),
            ("epochs", self.epochs),
            ("batch_size", self.batch_size),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {} is not usable", self.learning_rate)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub input: EncodedPair,
    pub label: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_loss: f64,
    pub dev_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub epochs: Vec<EpochRecord>,
    /// 1-based epoch whose parameters were kept.
    pub best_epoch: usize,
}

/// Mean loss and accuracy (threshold 0.5) over `examples`.
pub fn evaluate(params: &NetworkParams, examples: &[Example], vectors: &WordVectors) -> (f64, f64) {
    if examples.is_empty() {
        return (0.0, 0.0);
    }
    let mut loss = 0.0;
    let mut correct = 0usize;
    for ex in examples {
        let t = forward(params, &ex.input, vectors);
        loss += bce_from_logit(t.logit, ex.label);
        if (t.probability >= 0.5) == ex.label {
            correct += 1;
        }
    }
    let n = examples.len() as f64;
    (loss / n, correct as f64 / n)
}

/// Mini-batch training with per-epoch reshuffling. The parameters of the
/// epoch with the best dev accuracy are returned (earliest on ties).
pub fn train_network(
    train: &[Example],
    dev: &[Example],
    vectors: &WordVectors,
    config: &NetworkConfig,
) -> Result<(NetworkParams, TrainingHistory)> {
    train_network_with(train, dev, vectors, config, |params, batch| batch_gradients(params, batch, vectors, config))
}

/// Like [`train_network`], with the mini-batch gradient supplied by the
/// caller (for example a multi-threaded one). `gradients` must return the
/// mean loss and mean gradient of the batch.
pub fn train_network_with<G>(
    train: &[Example],
    dev: &[Example],
    vectors: &WordVectors,
    config: &NetworkConfig,
    mut gradients: G,
) -> Result<(NetworkParams, TrainingHistory)>
where
    G: FnMut(&NetworkParams, &[(&EncodedPair, bool)]) -> (f64, NetworkParams),
{
    config.validate()?;
    if train.is_empty() || dev.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if vectors.dim() != config.word_dim {
        return Err(Error::DimensionMismatch { expected: config.word_dim, found: vectors.dim() });
    }
    let mut rng = crate::seeded_rng(config.seed);
    let mut params = NetworkParams::init(config, &mut rng);
    let mut opt = Optimizer::new(config.optimizer, config.learning_rate, &params);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut history = TrainingHistory::default();
    let mut best: Option<(f64, NetworkParams)> = None;

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<(&EncodedPair, bool)> = chunk.iter().map(|&i| (&train[i].input, train[i].label)).collect();
            let (loss, grads) = gradients(&params, &batch);
            total += loss * chunk.len() as f64;
            opt.step(&mut params, &grads);
        }
        if !params.is_finite() {
            return Err(Error::NonFinite(format!("network parameters after epoch {epoch}")));
        }
        let train_loss = total / train.len() as f64;
        let (dev_loss, dev_accuracy) = evaluate(&params, dev, vectors);
        log::info!("epoch {epoch}: train loss {train_loss:.4}, dev accuracy {dev_accuracy:.4}");
        history.epochs.push(EpochRecord { epoch, train_loss, dev_loss, dev_accuracy });
        if best.as_ref().is_none_or(|(s, _)| dev_accuracy > *s) {
            best = Some((dev_accuracy, params.clone()));
            history.best_epoch = epoch;
        }
    }
    let (_, params) = best.expect("at least one epoch");
    Ok((params, history))
}
