//! Text-only fake news and click-bait detection.
//!
//! The crate is `no_std` and only needs an allocator. It covers the whole
//! modelling side of the pipeline: tokenization and light linguistic
//! heuristics, PMI lexicon induction, skip-gram word embeddings, the
//! hand-crafted feature groups, a title-conditioned attention GRU that
//! produces a 128-d task embedding, an RBF-kernel SVM trained with SMO, and
//! the evaluation metrics. Reading and writing files lives in the companion
//! `fakenews-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod features;
pub mod linalg;
pub mod neural;
pub mod resources;
pub mod svm;
pub mod synthetic;
pub mod textproc;

pub use error::{Error, Result};

/// Seeded generator used everywhere randomness is needed.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's deterministic generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
