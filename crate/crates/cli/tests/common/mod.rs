//! Writes a synthetic corpus, its word vectors, static lexicons and a
//! pipeline configuration into a directory.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use fakenews_cli::formats::{dataset, vectors};
use fakenews_cli::PipelineConfig;
use fakenews_core::corpus::Dataset;
use fakenews_core::synthetic::{generate, SyntheticConfig};

pub struct Workspace {
    pub dir: PathBuf,
    pub config_path: PathBuf,
}

impl Workspace {
    pub fn config(&self) -> PipelineConfig {
        PipelineConfig::load(&self.config_path).expect("config parses")
    }
}

/// `train_share` of the articles go to train.jsonl, the rest to test.jsonl.
pub fn write_workspace(dir: &Path, synth: &SyntheticConfig, train_share: f64, extra_config: &str) -> Workspace {
    let corpus = generate(synth).expect("synthetic corpus");
    let items = corpus.dataset.into_items();
    let n_train = (items.len() as f64 * train_share).round() as usize;
    let mut train = items;
    let test = train.split_off(n_train);
    dataset::save_dataset(&dir.join("train.jsonl"), &Dataset::new(train)).unwrap();
    dataset::save_dataset(&dir.join("test.jsonl"), &Dataset::new(test)).unwrap();
    vectors::save_vectors(&dir.join("vectors.txt"), &corpus.vectors).unwrap();

    let statics = dir.join("static");
    std::fs::create_dir_all(&statics).unwrap();
    let words = corpus.vectors.vocab.words();
    let list = |range: std::ops::Range<usize>| words[range].join("\n") + "\n";
    std::fs::write(statics.join("foreign.txt"), list(20..30)).unwrap();
    std::fs::write(statics.join("english_equivalents.txt"), list(30..40)).unwrap();
    std::fs::write(statics.join("slang.txt"), list(40..50)).unwrap();
    let typos: String = words[50..60].iter().map(|w| format!("{w}\t{w}x\n")).collect();
    std::fs::write(statics.join("typos.tsv"), typos).unwrap();

    let config_path = dir.join("fakenews.toml");
    let text = format!(
        "dataset = \"train.jsonl\"\n\
         test = \"test.jsonl\"\n\
         embeddings = \"vectors.txt\"\n\
         static_lexicon_dir = \"static\"\n\
         lexicon_dir = \"lexicons\"\n\
         model_dir = \"model\"\n\
         word_dim = {}\n\
         {extra_config}\n",
        synth.dim
    );
    std::fs::write(&config_path, text).unwrap();
    Workspace { dir: dir.to_path_buf(), config_path }
}
