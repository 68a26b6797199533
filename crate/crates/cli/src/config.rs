//! The flat `key = value` pipeline configuration.

use std::path::{Path, PathBuf};

use fakenews_core::eval::{AblationSubset, DEFAULT_ABLATION};
use fakenews_core::features::{FeatureGroup, GroupSet, EMBEDDING_DIM, TASK_EMBEDDING_DIM};
use fakenews_core::neural::{NetworkConfig, OptimizerKind};
use fakenews_core::svm::{GridSearchSpec, DEFAULT_C_GRID, DEFAULT_FOLDS, DEFAULT_GAMMA_GRID, DEFAULT_TOL};
use fakenews_core::embeddings::SgnsConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Every recognised key with a one-line description, in help order.
pub const KEYS: &[(&str, &str)] = &[
    ("dataset", "labeled training set, JSON Lines (required)"),
    ("test", "labeled test set for `evaluate` and `ablate`"),
    ("lexicon_dir", "directory of the three PMI lexicon TSVs (default: lexicons)"),
    ("static_lexicon_dir", "directory with foreign.txt, english_equivalents.txt, slang.txt, typos.tsv"),
    ("profile_dir", "optional language profile: vowels.txt, stopwords.txt, abbreviations.txt, pos_lexicon.tsv, suffix_rules.tsv"),
    ("embeddings", "word vectors, text (`V D` header) or binary (default: vectors.txt)"),
    ("model_dir", "output directory for trained models (default: model)"),
    ("report", "report CSV path (default: <model_dir>/report.csv)"),
    ("groups", "feature groups, `+`-joined, e.g. `tfidf+attnn`; `all` is every group (default: tfidf+feats+attnn)"),
    ("ablation", "list of ablation rows (default: baseline, tfidf, attnn, tfidf+attnn, tfidf+feats+attnn)"),
    ("drop_duplicates", "drop repeated titles from the training set (default: false)"),
    ("export_features", "write the training feature matrix as CSV (default: true)"),
    ("seed", "seed for every random choice (default: 0)"),
    ("dev_fraction", "share of the training set held out as network dev set (default: 0.2)"),
    ("pmi_min_df", "minimum document frequency of lexicon terms (default: 5)"),
    ("pmi_smoothing", "add-k smoothing of PMI scores (default: 0.5)"),
    ("tfidf_min_df", "TF.IDF terms must occur in more than this many documents (default: 5)"),
    ("seq_len", "network sequence length per field (default: 50)"),
    ("word_dim", "word vector dimension fed to the network (default: 300)"),
    ("hidden", "GRU state size (default: 128)"),
    ("attention_dim", "attention projection size (default: 128)"),
    ("task_dim", "task embedding size (default: 128)"),
    ("epochs", "network training epochs (default: 20)"),
    ("batch_size", "network mini-batch size (default: 32)"),
    ("learning_rate", "network learning rate (default: 0.001)"),
    ("optimizer", "`rmsprop` or `adam` (default: rmsprop)"),
    ("c_grid", "SVM C values searched (default: [0.01, 0.1, 1, 10, 100])"),
    ("gamma_grid", "RBF gamma values searched (default: [1e-4, 1e-3, 1e-2, 0.1, 1])"),
    ("folds", "cross-validation folds of the grid search (default: 5)"),
    ("svm_tol", "SMO stopping tolerance (default: 0.001)"),
    ("embedding_dim", "dimension for `train-embeddings` (default: 300)"),
    ("window", "skip-gram context window (default: 5)"),
    ("negatives", "negative samples per pair (default: 5)"),
    ("embedding_epochs", "skip-gram epochs (default: 5)"),
    ("embedding_min_df", "vocabulary minimum document frequency (default: 5)"),
    ("subsample", "frequent-word subsampling threshold; unset disables it"),
];

const PATH_KEYS: [&str; 8] =
    ["dataset", "test", "lexicon_dir", "static_lexicon_dir", "profile_dir", "embeddings", "model_dir", "report"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dataset: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub lexicon_dir: PathBuf,
    pub static_lexicon_dir: Option<PathBuf>,
    pub profile_dir: Option<PathBuf>,
    pub embeddings: PathBuf,
    pub model_dir: PathBuf,
    pub report: Option<PathBuf>,

    pub groups: String,
    pub ablation: Vec<String>,
    pub drop_duplicates: bool,
    pub export_features: bool,
    pub seed: u64,
    pub dev_fraction: f64,

    pub pmi_min_df: usize,
    pub pmi_smoothing: f64,
    pub tfidf_min_df: usize,

    pub seq_len: usize,
    pub word_dim: usize,
    pub hidden: usize,
    pub attention_dim: usize,
    pub task_dim: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,

    pub c_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub folds: usize,
    pub svm_tol: f64,

    pub embedding_dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub embedding_epochs: usize,
    pub embedding_min_df: usize,
    pub subsample: Option<f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let net = NetworkConfig::default();
        let sgns = SgnsConfig::default();
        Self {
            dataset: None,
            test: None,
            lexicon_dir: "lexicons".into(),
            static_lexicon_dir: None,
            profile_dir: None,
            embeddings: "vectors.txt".into(),
            model_dir: "model".into(),
            report: None,
            groups: "tfidf+feats+attnn".into(),
            ablation: DEFAULT_ABLATION.iter().map(|s| s.to_string()).collect(),
            drop_duplicates: false,
            export_features: true,
            seed: 0,
            dev_fraction: 0.2,
            pmi_min_df: fakenews_core::resources::DEFAULT_MIN_DF,
            pmi_smoothing: fakenews_core::resources::DEFAULT_SMOOTHING,
            tfidf_min_df: fakenews_core::features::DEFAULT_TFIDF_MIN_DF,
            seq_len: net.seq_len,
            word_dim: net.word_dim,
            hidden: net.hidden,
            attention_dim: net.attention_dim,
            task_dim: net.task_dim,
            epochs: net.epochs,
            batch_size: net.batch_size,
            learning_rate: net.learning_rate,
            optimizer: net.optimizer,
            c_grid: DEFAULT_C_GRID.to_vec(),
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            svm_tol: DEFAULT_TOL,
            embedding_dim: sgns.dim,
            window: sgns.window,
            negatives: sgns.negatives,
            embedding_epochs: sgns.epochs,
            embedding_min_df: fakenews_core::embeddings::DEFAULT_MIN_DOC_FREQ,
            subsample: sgns.subsample,
        }
    }
}

/// What a command is about to read; used to check paths before any work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    BuildLexicons,
    TrainEmbeddings,
    Train,
    Evaluate { baseline_only: bool },
    Predict,
}

impl PipelineConfig {
    /// Parses TOML text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.resolve(base);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut self.lexicon_dir, &mut self.embeddings, &mut self.model_dir] {
            fix(p);
        }
        for p in [&mut self.dataset, &mut self.test, &mut self.static_lexicon_dir, &mut self.profile_dir, &mut self.report]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
    }

    pub fn group_set(&self) -> Result<GroupSet> {
        self.groups.parse().map_err(|e: fakenews_core::Error| CliError::Config(format!("groups: {e}")))
    }

    pub fn ablation_subsets(&self) -> Result<Vec<AblationSubset>> {
        self.ablation
            .iter()
            .map(|s| AblationSubset::parse(s).map_err(|e| CliError::Config(format!("ablation row `{s}`: {e}"))))
            .collect()
    }

    pub fn network(&self) -> NetworkConfig {
        NetworkConfig {
            seq_len: self.seq_len,
            word_dim: self.word_dim,
            hidden: self.hidden,
            attention_dim: self.attention_dim,
            task_dim: self.task_dim,
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            optimizer: self.optimizer,
            seed: self.seed,
        }
    }

    pub fn grid(&self) -> GridSearchSpec {
        GridSearchSpec {
            c_grid: self.c_grid.clone(),
            gamma_grid: self.gamma_grid.clone(),
            folds: self.folds,
            tol: self.svm_tol,
            seed: self.seed,
        }
    }

    pub fn sgns(&self) -> SgnsConfig {
        SgnsConfig {
            dim: self.embedding_dim,
            window: self.window,
            negatives: self.negatives,
            epochs: self.embedding_epochs,
            subsample: self.subsample,
            seed: self.seed,
            ..SgnsConfig::default()
        }
    }

    pub fn report_path(&self) -> PathBuf {
        self.report.clone().unwrap_or_else(|| self.model_dir.join("report.csv"))
    }

    /// Hex SHA-256 over every setting except file locations.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            for k in PATH_KEYS {
                map.remove(k);
            }
        }
        let digest = Sha256::digest(value.to_string().as_bytes());
        hex(&digest)
    }

    /// Checks values and the inputs `needs` will read, before any work.
    pub fn validate(&self, needs: Needs) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        let groups = self.group_set()?;
        let subsets = self.ablation_subsets()?;
        for s in &subsets {
            if let AblationSubset::Groups { groups: g, label } = s {
                if !g.is_subset(&groups) {
                    return bad(format!("ablation row `{label}` uses groups outside `{}`", self.groups));
                }
            }
        }
        if !(self.dev_fraction > 0.0 && self.dev_fraction < 1.0) {
            return bad(format!("dev_fraction must lie in (0, 1), got {}", self.dev_fraction));
        }
        if self.pmi_min_df == 0 || !(self.pmi_smoothing >= 0.0 && self.pmi_smoothing.is_finite()) {
            return bad("pmi_min_df must be positive and pmi_smoothing finite and non-negative".into());
        }
        self.network().validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.grid().validate().map_err(|e| CliError::Config(e.to_string()))?;
        if groups.contains(FeatureGroup::TaskEmbedding) && self.task_dim != TASK_EMBEDDING_DIM {
            return bad(format!("the attnn group needs task_dim = {TASK_EMBEDDING_DIM}, got {}", self.task_dim));
        }
        if groups.contains(FeatureGroup::Embedding) && self.word_dim != EMBEDDING_DIM {
            return bad(format!("the embedding group needs word_dim = {EMBEDDING_DIM}, got {}", self.word_dim));
        }
        if self.embedding_dim == 0 || self.window == 0 || self.embedding_epochs == 0 || self.embedding_min_df == 0 {
            return bad("embedding_dim, window, embedding_epochs and embedding_min_df must be positive".into());
        }

        let dataset = || self.dataset.as_deref().ok_or_else(|| CliError::Config("`dataset` is not set".into()));
        let exists = |p: &Path, key: &str| {
            if p.exists() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{key} `{}` does not exist", p.display())))
            }
        };
        match needs {
            Needs::BuildLexicons | Needs::TrainEmbeddings => exists(dataset()?, "dataset")?,
            Needs::Train => {
                exists(dataset()?, "dataset")?;
                self.check_model_inputs(&groups, &exists)?;
            }
            Needs::Evaluate { baseline_only } => {
                exists(dataset()?, "dataset")?;
                let test = self.test.as_deref().ok_or_else(|| CliError::Config("`test` is not set".into()))?;
                exists(test, "test")?;
                if !baseline_only {
                    self.check_model_inputs(&groups, &exists)?;
                }
            }
            Needs::Predict => self.check_model_inputs(&groups, &exists)?,
        }
        Ok(())
    }

    fn check_model_inputs(&self, groups: &GroupSet, exists: &dyn Fn(&Path, &str) -> Result<()>) -> Result<()> {
        if groups.contains(FeatureGroup::Pmi) {
            exists(&self.lexicon_dir, "lexicon_dir")?;
        }
        if groups.contains(FeatureGroup::Irregular) {
            let dir = self.static_lexicon_dir.as_deref().ok_or_else(|| {
                CliError::Config("the irregular group needs `static_lexicon_dir`".into())
            })?;
            exists(dir, "static_lexicon_dir")?;
        }
        if groups.contains(FeatureGroup::Embedding) || groups.contains(FeatureGroup::TaskEmbedding) {
            exists(&self.embeddings, "embeddings")?;
        }
        if let Some(dir) = &self.profile_dir {
            exists(dir, "profile_dir")?;
        }
        Ok(())
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// `--help` text listing every configuration key.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("Configuration keys (TOML, one `key = value` per line):\n");
    for (k, d) in KEYS {
        out.push_str(&format!("  {k:width$}  {d}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_field_is_documented() {
        let value = serde_json::to_value(PipelineConfig::default()).unwrap();
        let fields: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(fields.len(), KEYS.len());
        for f in fields {
            assert!(KEYS.iter().any(|(k, _)| k == f), "{f} undocumented");
        }
    }

    #[test]
    fn unknown_keys_and_groups_are_rejected() {
        assert!(matches!(PipelineConfig::parse("sed = 1", Path::new(".")), Err(CliError::Config(_))));
        let cfg = PipelineConfig::parse("groups = \"tfidf+bogus\"", Path::new(".")).unwrap();
        let err = cfg.validate(Needs::Train).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn hash_ignores_locations() {
        let a = PipelineConfig::parse("dataset = \"a.jsonl\"\nseed = 3", Path::new("/x")).unwrap();
        let b = PipelineConfig::parse("dataset = \"b.jsonl\"\nseed = 3", Path::new("/y")).unwrap();
        let c = PipelineConfig::parse("dataset = \"a.jsonl\"\nseed = 4", Path::new("/x")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.dataset.as_deref(), Some(Path::new("/x/a.jsonl")));
    }

    #[test]
    fn ablation_rows_must_fit_groups() {
        let cfg = PipelineConfig::parse("groups = \"tfidf\"\nablation = [\"baseline\", \"attnn\"]", Path::new(".")).unwrap();
        assert!(cfg.validate(Needs::BuildLexicons).is_err());
    }
}
