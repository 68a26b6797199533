//! Skip-gram word embeddings with negative sampling, document averages and
//! cosine similarity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{axpy, dot, norm, sigmoid, softplus, Matrix};
use crate::{seeded_rng, Error, Result};

pub const DEFAULT_DIM: usize = 300;
pub const DEFAULT_MIN_DOC_FREQ: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    index: BTreeMap<String, usize>,
    freq: Vec<u64>,
    doc_freq: Vec<u64>,
    min_doc_freq: usize,
}

impl Vocabulary {
    /// Builds a vocabulary from words in index order. Frequencies are
    /// unknown and recorded as zero; duplicates are rejected.
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::invalid(alloc::format!("duplicate word `{w}`")));
            }
        }
        let n = words.len();
        Ok(Self { words, index, freq: vec![0; n], doc_freq: vec![0; n], min_doc_freq: 0 })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn frequency(&self, idx: usize) -> u64 {
        self.freq[idx]
    }

    pub fn doc_frequency(&self, idx: usize) -> u64 {
        self.doc_freq[idx]
    }

    pub fn min_doc_freq(&self) -> usize {
        self.min_doc_freq
    }
}

/// Words occurring in at least `min_doc_freq` documents, indexed by
/// descending corpus frequency with ties broken lexicographically.
pub fn build_vocab<D, W>(corpus: &[D], min_doc_freq: usize) -> Result<Vocabulary>
where
    D: AsRef<[W]>,
    W: AsRef<str>,
{
    if min_doc_freq == 0 {
        return Err(Error::invalid("min_doc_freq must be at least 1"));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut counts: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for doc in corpus {
        let mut seen = BTreeSet::new();
        for w in doc.as_ref() {
            let w = w.as_ref();
            let c = counts.entry(w).or_default();
            c.0 += 1;
            if seen.insert(w) {
                c.1 += 1;
            }
        }
    }
    let mut kept: Vec<(&str, u64, u64)> = counts
        .into_iter()
        .filter(|(_, (_, df))| *df >= min_doc_freq as u64)
        .map(|(w, (f, df))| (w, f, df))
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let words: Vec<String> = kept.iter().map(|k| String::from(k.0)).collect();
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    Ok(Vocabulary {
        words,
        index,
        freq: kept.iter().map(|k| k.1).collect(),
        doc_freq: kept.iter().map(|k| k.2).collect(),
        min_doc_freq,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMatrix {
    input: Matrix,
    /// Context vectors; absent for vectors loaded from a pretrained file.
    output: Option<Matrix>,
}

impl EmbeddingMatrix {
    pub fn from_input(input: Matrix) -> Result<Self> {
        if !input.is_finite() {
            return Err(Error::NonFinite("embedding matrix".into()));
        }
        Ok(Self { input, output: None })
    }

    pub fn dim(&self) -> usize {
        self.input.cols()
    }

    pub fn vocab_size(&self) -> usize {
        self.input.rows()
    }

    pub fn vector(&self, idx: usize) -> &[f64] {
        self.input.row(idx)
    }

    pub fn input(&self) -> &Matrix {
        &self.input
    }

    pub fn output(&self) -> Option<&Matrix> {
        self.output.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgnsConfig {
    pub dim: usize,
    /// Context words on each side of the center word.
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    /// Frequent-word subsampling threshold; `None` disables it.
    pub subsample: Option<f64>,
    pub seed: u64,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        Self {
            dim: DEFAULT_DIM,
            window: 5,
            negatives: 5,
            epochs: 5,
            lr_start: 0.025,
            lr_end: 0.0001,
            subsample: None,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SgnsReport {
    /// Mean loss per (center, context) pair for each epoch.
    pub epoch_losses: Vec<f64>,
}

/// Loss of one (center, context, negatives) example:
/// `-log σ(u_c·v) - Σ log σ(-u_n·v)`.
pub fn sgns_loss(center: &[f64], positive: &[f64], negatives: &[&[f64]]) -> f64 {
    softplus(-dot(positive, center)) + negatives.iter().map(|u| softplus(dot(u, center))).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub loss: f64,
    pub center: Vec<f64>,
    pub positive: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradients of [`sgns_loss`].
pub fn sgns_gradients(center: &[f64], positive: &[f64], negatives: &[&[f64]]) -> SgnsGradients {
    let mut d_center = vec![0.0; center.len()];
    let g_pos = sigmoid(dot(positive, center)) - 1.0;
    axpy(g_pos, positive, &mut d_center);
    let d_positive = center.iter().map(|v| g_pos * v).collect();
    let d_negatives = negatives
        .iter()
        .map(|u| {
            let g = sigmoid(dot(u, center));
            axpy(g, u, &mut d_center);
            center.iter().map(|v| g * v).collect()
        })
        .collect();
    SgnsGradients { loss: sgns_loss(center, positive, negatives), center: d_center, positive: d_positive, negatives: d_negatives }
}

/// One SGD step on a single example, updating `output` rows in place and
/// `center` at the end. Returns the example loss before the update.
fn sgns_step(center: &mut [f64], output: &mut Matrix, positive: usize, negatives: &[usize], lr: f64, scratch: &mut [f64]) -> f64 {
    scratch.iter_mut().for_each(|x| *x = 0.0);
    let mut loss = 0.0;
    for (target, label) in core::iter::once((positive, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0))) {
        let u = output.row_mut(target);
        let score = dot(u, center);
        loss += if label > 0.0 { softplus(-score) } else { softplus(score) };
        // g is the negative loss gradient with respect to the score
        let g = label - sigmoid(score);
        axpy(g, u, scratch);
        axpy(lr * g, center, u);
    }
    axpy(lr, scratch, center);
    loss
}

struct NoiseTable {
    cumulative: Vec<f64>,
}

impl NoiseTable {
    /// Unigram distribution raised to the 3/4 power.
    fn new(vocab: &Vocabulary) -> Self {
        let mut acc = 0.0;
        let cumulative = (0..vocab.len())
            .map(|i| {
                acc += libm::pow(vocab.frequency(i).max(1) as f64, 0.75);
                acc
            })
            .collect();
        Self { cumulative }
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let x = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= x).min(self.cumulative.len() - 1)
    }
}

/// Trains skip-gram vectors with negative sampling. Single-threaded and
/// fully determined by `config.seed`.
pub fn train_skipgram<D, W>(corpus: &[D], vocab: &Vocabulary, config: &SgnsConfig) -> Result<(EmbeddingMatrix, SgnsReport)>
where
    D: AsRef<[W]>,
    W: AsRef<str>,
{
    if config.dim == 0 {
        return Err(Error::invalid("embedding dimension must be positive"));
    }
    if config.window == 0 {
        return Err(Error::invalid("window must be positive"));
    }
    if config.negatives == 0 || config.epochs == 0 {
        return Err(Error::invalid("negatives and epochs must be positive"));
    }
    if vocab.is_empty() {
        return Err(Error::invalid("vocabulary is empty"));
    }
    let docs: Vec<Vec<usize>> =
        corpus.iter().map(|d| d.as_ref().iter().filter_map(|w| vocab.get(w.as_ref())).collect()).collect();
    let total_tokens: usize = docs.iter().map(Vec::len).sum();
    if total_tokens < 2 {
        return Err(Error::invalid("corpus is empty after vocabulary filtering"));
    }

    let mut rng = seeded_rng(config.seed);
    let dim = config.dim;
    let v = vocab.len();
    let mut input = Matrix::zeros(v, dim);
    let half = 0.5 / dim as f64;
    input.as_mut_slice().iter_mut().for_each(|x| *x = rng.gen_range(-half..half));
    let mut output = Matrix::zeros(v, dim);
    let noise = NoiseTable::new(vocab);

    let keep_prob: Option<Vec<f64>> = config.subsample.map(|t| {
        let total: f64 = (0..v).map(|i| vocab.frequency(i) as f64).sum();
        (0..v)
            .map(|i| {
                let f = vocab.frequency(i) as f64 / total.max(1.0);
                if f <= 0.0 { 1.0 } else { ((libm::sqrt(f / t) + 1.0) * t / f).min(1.0) }
            })
            .collect()
    });

    let total_steps = (config.epochs * total_tokens) as f64;
    let mut step = 0usize;
    let mut scratch = vec![0.0; dim];
    let mut center = vec![0.0; dim];
    let mut negs = vec![0usize; config.negatives];
    let mut report = SgnsReport::default();
    for _ in 0..config.epochs {
        let mut epoch_loss = 0.0;
        let mut pairs = 0usize;
        for doc in &docs {
            let doc: Vec<usize> = match &keep_prob {
                Some(p) => doc.iter().copied().filter(|&w| rng.gen::<f64>() < p[w]).collect(),
                None => doc.clone(),
            };
            for (pos, &w) in doc.iter().enumerate() {
                let progress = step as f64 / total_steps;
                let lr = (config.lr_start * (1.0 - progress)).max(config.lr_end);
                step += 1;
                let lo = pos.saturating_sub(config.window);
                let hi = (pos + config.window + 1).min(doc.len());
                for ctx_pos in lo..hi {
                    if ctx_pos == pos {
                        continue;
                    }
                    let ctx = doc[ctx_pos];
                    for n in negs.iter_mut() {
                        let mut s = noise.sample(&mut rng);
                        if s == ctx {
                            s = noise.sample(&mut rng);
                        }
                        *n = s;
                    }
                    center.copy_from_slice(input.row(w));
                    epoch_loss += sgns_step(&mut center, &mut output, ctx, &negs, lr, &mut scratch);
                    input.row_mut(w).copy_from_slice(&center);
                    pairs += 1;
                }
            }
        }
        let mean = if pairs > 0 { epoch_loss / pairs as f64 } else { 0.0 };
        log::debug!("sgns epoch {}: mean loss {mean:.5}", report.epoch_losses.len() + 1);
        report.epoch_losses.push(mean);
    }
    if !input.is_finite() || !output.is_finite() {
        return Err(Error::NonFinite("trained embeddings".into()));
    }
    Ok((EmbeddingMatrix { input, output: Some(output) }, report))
}

/// Mean of the input vectors of in-vocabulary tokens; zero vector when no
/// token is known.
pub fn doc_vector<'a>(tokens: impl IntoIterator<Item = &'a str>, vocab: &Vocabulary, matrix: &EmbeddingMatrix) -> Vec<f64> {
    let mut sum = vec![0.0; matrix.dim()];
    let mut n = 0usize;
    for t in tokens {
        if let Some(i) = vocab.get(t) {
            axpy(1.0, matrix.vector(i), &mut sum);
            n += 1;
        }
    }
    if n > 0 {
        sum.iter_mut().for_each(|x| *x /= n as f64);
    }
    sum
}

/// Cosine similarity; zero when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}
