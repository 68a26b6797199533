use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::attention::{Attention, AttentionTrace};
use super::gru::{GruCell, GruTrace};
use super::NetworkConfig;
use crate::features::WordVectors;
use crate::linalg::{axpy, dot, sigmoid, softplus, tanh, Matrix};
use crate::textproc::tokenize;
use crate::{Error, Result};

/// One position of a fixed-length input sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    /// Masked: the recurrent state is carried through unchanged.
    Pad,
    /// In-vocabulary word.
    Word(usize),
    /// Out-of-vocabulary word, fed as a zero vector.
    Unknown,
}

/// A title/content pair encoded to `seq_len` slots each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedPair {
    pub title: Vec<Slot>,
    pub content: Vec<Slot>,
}

fn encode_text(text: &str, vectors: &WordVectors, seq_len: usize) -> Vec<Slot> {
    let tokens = tokenize(text);
    let mut out: Vec<Slot> = tokens
        .words()
        .take(seq_len)
        .map(|t| vectors.vocab.get(&t.lower).map_or(Slot::Unknown, Slot::Word))
        .collect();
    out.resize(seq_len, Slot::Pad);
    out
}

/// Tokenizes, truncates to `seq_len` and pads both fields.
pub fn encode(title: &str, content: &str, vectors: &WordVectors, seq_len: usize) -> EncodedPair {
    EncodedPair { title: encode_text(title, vectors, seq_len), content: encode_text(content, vectors, seq_len) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub title_gru: GruCell,
    pub content_gru: GruCell,
    pub attention: Attention,
    pub w_p: Matrix,
    pub w_x: Matrix,
    pub w_e: Matrix,
    pub b_e: Matrix,
    pub w_o: Matrix,
    pub b_o: Matrix,
}

fn glorot(m: &mut Matrix, rng: &mut impl Rng) {
    let limit = libm::sqrt(6.0 / (m.rows() + m.cols()) as f64);
    m.as_mut_slice().iter_mut().for_each(|v| *v = rng.gen_range(-limit..limit));
}

impl NetworkParams {
    pub fn zeros(config: &NetworkConfig) -> Self {
        let h = config.hidden;
        Self {
            title_gru: GruCell::zeros(config.word_dim, h),
            content_gru: GruCell::zeros(config.word_dim, h),
            attention: Attention::zeros(h, config.attention_dim),
            w_p: Matrix::zeros(h, h),
            w_x: Matrix::zeros(h, h),
            w_e: Matrix::zeros(config.task_dim, h),
            b_e: Matrix::zeros(config.task_dim, 1),
            w_o: Matrix::zeros(1, config.task_dim),
            b_o: Matrix::zeros(1, 1),
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(config: &NetworkConfig, rng: &mut impl Rng) -> Self {
        let mut p = Self::zeros(config);
        for (name, m) in p.tensors_mut() {
            let is_bias = name.rsplit('.').next().is_some_and(|n| n.starts_with("b_"));
            if !is_bias {
                glorot(m, rng);
            }
        }
        p
    }

    pub fn task_dim(&self) -> usize {
        self.w_e.rows()
    }

    pub fn word_dim(&self) -> usize {
        self.title_gru.input()
    }

    /// All tensors with dotted names, in a fixed order.
    pub fn tensors(&self) -> Vec<(String, &Matrix)> {
        let mut out = Vec::new();
        for (prefix, cell) in [("title_gru", &self.title_gru), ("content_gru", &self.content_gru)] {
            out.extend(cell.tensors().into_iter().map(|(n, m)| (format!("{prefix}.{n}"), m)));
        }
        out.extend(self.attention.tensors().into_iter().map(|(n, m)| (format!("attention.{n}"), m)));
        for (n, m) in [
            ("head.w_p", &self.w_p),
            ("head.w_x", &self.w_x),
            ("head.w_e", &self.w_e),
            ("head.b_e", &self.b_e),
            ("head.w_o", &self.w_o),
            ("head.b_o", &self.b_o),
        ] {
            out.push((n.into(), m));
        }
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Matrix)> {
        let mut out = Vec::new();
        for (prefix, cell) in [("title_gru", &mut self.title_gru), ("content_gru", &mut self.content_gru)] {
            out.extend(cell.tensors_mut().into_iter().map(|(n, m)| (format!("{prefix}.{n}"), m)));
        }
        out.extend(self.attention.tensors_mut().into_iter().map(|(n, m)| (format!("attention.{n}"), m)));
        for (n, m) in [
            ("head.w_p", &mut self.w_p),
            ("head.w_x", &mut self.w_x),
            ("head.w_e", &mut self.w_e),
            ("head.b_e", &mut self.b_e),
            ("head.w_o", &mut self.w_o),
            ("head.b_o", &mut self.b_o),
        ] {
            out.push((n.into(), m));
        }
        out
    }

    /// Rebuilds parameters from named tensors; every tensor must be present
    /// with the shape implied by `config`.
    pub fn from_tensors(config: &NetworkConfig, tensors: &[(String, Matrix)]) -> Result<Self> {
        let mut p = Self::zeros(config);
        let mut seen = 0;
        for (name, slot) in p.tensors_mut() {
            let (_, m) = tensors
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| Error::Missing(format!("tensor `{name}`")))?;
            if m.shape() != slot.shape() {
                return Err(Error::InvalidParameter(format!(
                    "tensor `{name}` has shape {:?}, expected {:?}",
                    m.shape(),
                    slot.shape()
                )));
            }
            *slot = m.clone();
            seen += 1;
        }
        if seen != tensors.len() {
            return Err(Error::InvalidParameter("unexpected extra tensors".into()));
        }
        Ok(p)
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, m)| m.is_finite())
    }
}

/// Everything the backward pass needs from one forward evaluation.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    title_inputs: Vec<Vec<f64>>,
    content_inputs: Vec<Vec<f64>>,
    title: GruTrace,
    content: GruTrace,
    attention: AttentionTrace,
    r_n: Vec<f64>,
    h_n: Vec<f64>,
    h_star: Vec<f64>,
    pub embedding: Vec<f64>,
    pub logit: f64,
    pub probability: f64,
}

impl ForwardTrace {
    /// Attention weights of each processed content step over the processed
    /// title steps.
    pub fn attention_weights(&self) -> &[Vec<f64>] {
        self.attention.weights()
    }
}

fn inputs(slots: &[Slot], vectors: &WordVectors) -> Vec<Vec<f64>> {
    let dim = vectors.dim();
    slots
        .iter()
        .filter_map(|s| match s {
            Slot::Pad => None,
            Slot::Word(i) => Some(vectors.matrix.vector(*i).to_vec()),
            Slot::Unknown => Some(vec![0.0; dim]),
        })
        .collect()
}

fn slices(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(Vec::as_slice).collect()
}

pub fn forward(params: &NetworkParams, input: &EncodedPair, vectors: &WordVectors) -> ForwardTrace {
    let title_inputs = inputs(&input.title, vectors);
    let content_inputs = inputs(&input.content, vectors);
    let title = params.title_gru.forward(title_inputs.iter().map(Vec::as_slice));
    let content = params.content_gru.forward(content_inputs.iter().map(Vec::as_slice));
    let ys: Vec<&[f64]> = title.states().collect();
    let hs: Vec<&[f64]> = content.states().collect();
    let (attention, r_n) = params.attention.forward(&ys, &hs);
    let h_n = content.last().map_or_else(|| vec![0.0; params.w_x.cols()], <[f64]>::to_vec);

    let mut h_star = params.w_p.mul_vec(&r_n);
    params.w_x.mul_vec_add(&h_n, &mut h_star);
    h_star.iter_mut().for_each(|v| *v = tanh(*v));
    let mut embedding = params.b_e.as_slice().to_vec();
    params.w_e.mul_vec_add(&h_star, &mut embedding);
    embedding.iter_mut().for_each(|v| *v = tanh(*v));
    let logit = dot(params.w_o.as_slice(), &embedding) + params.b_o.as_slice()[0];
    ForwardTrace {
        title_inputs,
        content_inputs,
        title,
        content,
        attention,
        r_n,
        h_n,
        h_star,
        embedding,
        logit,
        probability: sigmoid(logit),
    }
}

/// Binary cross-entropy of a logit against a 0/1 target.
pub fn bce_from_logit(logit: f64, target: bool) -> f64 {
    if target {
        softplus(-logit)
    } else {
        softplus(logit)
    }
}

/// Accumulates `scale · ∂loss/∂θ` of one example into `grads`.
fn backward(params: &NetworkParams, trace: &ForwardTrace, target: bool, scale: f64, grads: &mut NetworkParams) {
    let d_logit = scale * (trace.probability - if target { 1.0 } else { 0.0 });
    axpy(d_logit, &trace.embedding, grads.w_o.as_mut_slice());
    grads.b_o.as_mut_slice()[0] += d_logit;

    let d_e_pre: Vec<f64> = params
        .w_o
        .as_slice()
        .iter()
        .zip(&trace.embedding)
        .map(|(w, e)| d_logit * w * (1.0 - e * e))
        .collect();
    grads.w_e.add_outer(&d_e_pre, &trace.h_star);
    axpy(1.0, &d_e_pre, grads.b_e.as_mut_slice());
    let mut d_h_star = vec![0.0; trace.h_star.len()];
    params.w_e.mul_t_vec_add(&d_e_pre, &mut d_h_star);
    let d_star_pre: Vec<f64> = d_h_star.iter().zip(&trace.h_star).map(|(d, h)| d * (1.0 - h * h)).collect();
    grads.w_p.add_outer(&d_star_pre, &trace.r_n);
    grads.w_x.add_outer(&d_star_pre, &trace.h_n);
    let n = trace.h_n.len();
    let mut d_r = vec![0.0; n];
    params.w_p.mul_t_vec_add(&d_star_pre, &mut d_r);

    let ys: Vec<&[f64]> = trace.title.states().collect();
    let hs: Vec<&[f64]> = trace.content.states().collect();
    let mut d_ys = vec![vec![0.0; n]; ys.len()];
    let mut d_hs = vec![vec![0.0; n]; hs.len()];
    if let Some(last) = d_hs.last_mut() {
        params.w_x.mul_t_vec_add(&d_star_pre, last);
    }
    params.attention.backward(&ys, &hs, &trace.attention, &d_r, &mut grads.attention, &mut d_ys, &mut d_hs);
    params.content_gru.backward(&slices(&trace.content_inputs), &trace.content, &d_hs, &mut grads.content_gru);
    params.title_gru.backward(&slices(&trace.title_inputs), &trace.title, &d_ys, &mut grads.title_gru);
}

/// Mean BCE loss over `batch` and its gradient.
pub fn batch_gradients(
    params: &NetworkParams,
    batch: &[(&EncodedPair, bool)],
    vectors: &WordVectors,
    config: &NetworkConfig,
) -> (f64, NetworkParams) {
    let mut grads = NetworkParams::zeros(config);
    if batch.is_empty() {
        return (0.0, grads);
    }
    let scale = 1.0 / batch.len() as f64;
    let mut loss = 0.0;
    for (input, target) in batch {
        let trace = forward(params, input, vectors);
        loss += bce_from_logit(trace.logit, *target);
        backward(params, &trace, *target, scale, &mut grads);
    }
    (loss * scale, grads)
}

/// The 128-d task embedding and fake-news probability of one article.
pub fn task_embedding(params: &NetworkParams, input: &EncodedPair, vectors: &WordVectors) -> (Vec<f64>, f64) {
    let t = forward(params, input, vectors);
    (t.embedding, t.probability)
}
