//! The batch commands: lexicons, embeddings, training, evaluation,
//! prediction and ablation.

use std::io::Write;
use std::path::{Path, PathBuf};

use fakenews_core::corpus::{deduplicate_by_title, normalize_title, split_train_dev, Article, Dataset};
use fakenews_core::embeddings::{build_vocab, train_skipgram};
use fakenews_core::eval::{
    ablation_run, confusion, macro_metrics, majority_baseline, AblationData, AblationSubset, Metrics, ReportRow,
};
use fakenews_core::features::{
    fit_scaler, fit_tfidf, FeatureGroup, FeatureModels, FeatureSchema, GroupSet, TfidfConfig, WordVectors,
    CONTENT_VOCAB_CAP, TITLE_VOCAB_CAP,
};
use fakenews_core::neural::{
    encode, task_embedding, train_network_with, Example, NetworkConfig, NetworkParams, TrainingHistory,
};
use fakenews_core::resources::{build_pmi_lexicon, PmiClass, StaticKind, TermKind};
use fakenews_core::svm::{
    cross_validate, select_best, squared_distances, stratified_folds, train_smo, GridCell, GridResult, GridSearchSpec,
    SmoConfig, SvmModel,
};
use fakenews_core::textproc::tokenize;
use serde::{Deserialize, Serialize};

use crate::config::{Needs, PipelineConfig};
use crate::error::{CliError, Result, StageExt};
use crate::formats::artifacts::{self, FeaturesArtifact, SvmArtifact, TfidfArtifact, SCHEMA_VERSION};
use crate::formats::params::{self, ParamsHeader};
use crate::formats::{dataset, resources, sha256_file, sha256_hex, tables, vectors, write_atomic, ArtifactMeta};
use crate::parallel::{batch_gradients_parallel, Threads};

pub const MANIFEST: &str = "manifest.json";
pub const TFIDF_FILE: &str = "tfidf.json";
pub const FEATURES_FILE: &str = "features.json";
pub const NETWORK_FILE: &str = "network.params";
pub const HISTORY_FILE: &str = "history.csv";
pub const SVM_FILE: &str = "svm.json";
pub const TRAIN_FEATURES_FILE: &str = "train_features.csv";

/// Settings that affect speed only, never results.
#[derive(Debug, Clone, Copy)]
pub struct Runtime {
    pub threads: Threads,
}

impl Default for Runtime {
    fn default() -> Self {
        Self { threads: Threads::available() }
    }
}

fn meta(cfg: &PipelineConfig) -> ArtifactMeta {
    ArtifactMeta { config_hash: cfg.hash(), seed: cfg.seed }
}

fn load_labeled(path: &Path, drop_duplicates: bool) -> Result<Dataset> {
    let d = dataset::load_dataset(path)?;
    if d.is_empty() {
        return Err(CliError::data(path, fakenews_core::Error::EmptyDataset));
    }
    d.labels().map_err(|e| CliError::data(path, e))?;
    let (deduped, report) = deduplicate_by_title(&d, normalize_title);
    if !report.groups.is_empty() {
        log::info!(
            "{}: {} titles repeat ({} items, most reposted {} times)",
            path.display(),
            report.groups.len(),
            report.duplicated_items(),
            report.max_reposts()
        );
    }
    Ok(if drop_duplicates { deduped } else { d })
}

fn training_set(cfg: &PipelineConfig) -> Result<Dataset> {
    let path = cfg.dataset.as_deref().ok_or_else(|| CliError::Config("`dataset` is not set".into()))?;
    load_labeled(path, cfg.drop_duplicates)
}

fn fake_targets(d: &Dataset) -> Vec<i8> {
    d.fake_targets().expect("labels checked at load")
}

// ---------------------------------------------------------------- lexicons

/// Builds the three PMI lexicons from the training set, writes them to
/// `lexicon_dir` and prints the top terms of every class (fake first).
pub fn build_lexicons(cfg: &PipelineConfig, summary: &mut dyn Write) -> Result<Vec<PathBuf>> {
    cfg.validate(Needs::BuildLexicons)?;
    let d = training_set(cfg)?;
    let profile = resources::load_profile(cfg.profile_dir.as_deref())?;
    std::fs::create_dir_all(&cfg.lexicon_dir).map_err(|e| CliError::io(&cfg.lexicon_dir, e))?;
    let meta = meta(cfg);
    let mut written = Vec::new();
    for kind in TermKind::ALL {
        let lex = build_pmi_lexicon(&d, kind, cfg.pmi_min_df, cfg.pmi_smoothing, &profile)?;
        let path = resources::lexicon_path(&cfg.lexicon_dir, kind);
        write_atomic(&path, resources::lexicon_tsv(&meta, &lex).as_bytes())?;
        let io = |e| CliError::io("<summary>", e);
        writeln!(summary, "{kind} lexicon: {} terms -> {}", lex.len(), path.display()).map_err(io)?;
        for class in PmiClass::ALL {
            let top = lex.top_terms(class, 10);
            let terms: Vec<String> = top.iter().map(|(t, s)| format!("{t} ({s:.2})")).collect();
            writeln!(summary, "  {}: {}", class.as_str(), terms.join(", ")).map_err(io)?;
        }
        written.push(path);
    }
    Ok(written)
}

// -------------------------------------------------------------- embeddings

fn word_lists(d: &Dataset) -> Vec<Vec<String>> {
    d.articles()
        .map(|a| {
            let mut words: Vec<String> = tokenize(&a.title).words().map(|t| t.lower.clone()).collect();
            words.extend(tokenize(&a.content).words().map(|t| t.lower.clone()));
            words
        })
        .collect()
}

/// Trains skip-gram vectors on the training set's titles and contents.
pub fn train_embeddings(cfg: &PipelineConfig) -> Result<PathBuf> {
    cfg.validate(Needs::TrainEmbeddings)?;
    let path = cfg.dataset.as_deref().expect("validated");
    let d = dataset::load_dataset(path)?;
    let docs = word_lists(&d);
    let vocab = build_vocab(&docs, cfg.embedding_min_df).map_err(|e| CliError::data(path, e))?;
    log::info!("vocabulary: {} words in {} documents", vocab.len(), docs.len());
    let (matrix, report) = train_skipgram(&docs, &vocab, &cfg.sgns()).map_err(|e| CliError::data(path, e))?;
    if let Some(last) = report.epoch_losses.last() {
        log::info!("skip-gram final epoch loss {last:.5}");
    }
    let v = WordVectors::new(vocab, matrix)?;
    if let Some(parent) = cfg.embeddings.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    vectors::save_vectors(&cfg.embeddings, &v)?;
    Ok(cfg.embeddings.clone())
}

// ------------------------------------------------------------------- train

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
}

/// Index of a model directory, written last by `train`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    #[serde(flatten)]
    pub meta: ArtifactMeta,
    pub groups: String,
    pub schema_hash: String,
    /// Model files, relative to the model directory.
    pub artifacts: Vec<ManifestEntry>,
    /// Resource files the features were computed from.
    pub inputs: Vec<ManifestEntry>,
    /// Other outputs, relative to the model directory.
    pub outputs: Vec<ManifestEntry>,
}

/// Feature resources the configuration's groups need.
struct Resources {
    models: FeatureModels,
    inputs: Vec<(String, PathBuf)>,
}

fn load_resources(cfg: &PipelineConfig, groups: &GroupSet) -> Result<Resources> {
    let mut inputs = Vec::new();
    let profile = resources::load_profile(cfg.profile_dir.as_deref())?;
    if let Some(dir) = &cfg.profile_dir {
        for name in ["vowels.txt", "stopwords.txt", "abbreviations.txt", "pos_lexicon.tsv", "suffix_rules.tsv"] {
            let p = dir.join(name);
            if p.exists() {
                inputs.push((format!("profile.{name}"), p));
            }
        }
    }
    let mut models = FeatureModels::new(profile);
    if groups.contains(FeatureGroup::Pmi) {
        models.pmi = Some(resources::load_pmi_lexicons(&cfg.lexicon_dir)?);
        for kind in TermKind::ALL {
            inputs.push((format!("lexicon.{kind}"), resources::lexicon_path(&cfg.lexicon_dir, kind)));
        }
    }
    if groups.contains(FeatureGroup::Irregular) {
        let dir = cfg.static_lexicon_dir.as_deref().expect("validated");
        models.static_lexicons = Some(resources::load_static_lexicons(dir)?);
        for kind in StaticKind::ALL {
            inputs.push((format!("static.{}", kind.as_str()), resources::static_lexicon_path(dir, kind)));
        }
    }
    if groups.contains(FeatureGroup::Embedding) || groups.contains(FeatureGroup::TaskEmbedding) {
        let v = vectors::load_vectors(&cfg.embeddings)?;
        if v.dim() != cfg.word_dim {
            return Err(CliError::Data {
                path: cfg.embeddings.clone(),
                source: fakenews_core::Error::DimensionMismatch { expected: cfg.word_dim, found: v.dim() },
            });
        }
        models.vectors = Some(v);
        inputs.push(("embeddings".into(), cfg.embeddings.clone()));
    }
    Ok(Resources { models, inputs })
}

fn tfidf_config(cfg: &PipelineConfig) -> TfidfConfig {
    TfidfConfig { content_cap: CONTENT_VOCAB_CAP, title_cap: TITLE_VOCAB_CAP, df_above: cfg.tfidf_min_df }
}

fn encode_all(threads: Threads, articles: &[&Article], vectors: &WordVectors, seq_len: usize) -> Vec<Example> {
    threads.map(articles, |a| Example { input: encode(&a.title, &a.content, vectors, seq_len), label: false })
}

fn train_network_stage(
    rt: Runtime,
    cfg: &PipelineConfig,
    d: &Dataset,
    vectors: &WordVectors,
) -> Result<(NetworkParams, TrainingHistory)> {
    let net = cfg.network();
    let (train, dev) = split_train_dev(d, cfg.dev_fraction, cfg.seed)?;
    let examples = |part: &Dataset| -> Vec<Example> {
        let articles: Vec<&Article> = part.articles().collect();
        let mut ex = encode_all(rt.threads, &articles, vectors, net.seq_len);
        for (e, y) in ex.iter_mut().zip(fake_targets(part)) {
            e.label = y > 0;
        }
        ex
    };
    let (train, dev) = (examples(&train), examples(&dev));
    log::info!("network: {} training and {} dev examples", train.len(), dev.len());
    let result = train_network_with(&train, &dev, vectors, &net, |params, batch| {
        batch_gradients_parallel(rt.threads, params, batch, vectors, &net)
    })?;
    log::info!("network: kept epoch {}", result.1.best_epoch);
    Ok(result)
}

/// Task embeddings and fake probabilities, one per article.
fn network_outputs(
    rt: Runtime,
    params: &NetworkParams,
    net: &NetworkConfig,
    vectors: &WordVectors,
    articles: &[&Article],
) -> Vec<(Vec<f64>, f64)> {
    rt.threads.map(articles, |a| task_embedding(params, &encode(&a.title, &a.content, vectors, net.seq_len), vectors))
}

fn assemble_all(
    rt: Runtime,
    models: &FeatureModels,
    schema: &FeatureSchema,
    articles: &[&Article],
    task: Option<&[(Vec<f64>, f64)]>,
) -> Result<Vec<Vec<f64>>> {
    let indexed: Vec<(usize, &Article)> = articles.iter().copied().enumerate().collect();
    rt.threads
        .map(&indexed, |(i, a)| models.assemble(a, schema, task.map(|t| t[*i].0.as_slice())))
        .into_iter()
        .collect::<fakenews_core::Result<_>>()
        .map_err(CliError::from)
}

/// Grid search with the cells spread over threads; identical to the
/// serial search.
pub fn grid_search(rt: Runtime, xs: &[Vec<f64>], ys: &[i8], spec: &GridSearchSpec) -> Result<GridResult> {
    spec.validate()?;
    let folds = stratified_folds(ys, spec.folds, spec.seed)?;
    let d2 = squared_distances(xs);
    let cells = spec.cells();
    let table = rt
        .threads
        .map(&cells, |&(c, gamma)| {
            cross_validate(&d2, ys, &folds, c, gamma, spec.tol, spec.seed).map(|accuracy| GridCell { c, gamma, accuracy })
        })
        .into_iter()
        .collect::<fakenews_core::Result<Vec<_>>>()?;
    for cell in &table {
        log::debug!("grid C={} gamma={}: accuracy {:.4}", cell.c, cell.gamma, cell.accuracy);
    }
    let best = select_best(&table).expect("non-empty grid");
    Ok(GridResult { best, table })
}

fn final_svm(xs: &[Vec<f64>], ys: &[i8], spec: &GridSearchSpec, best: &GridCell) -> Result<SvmModel> {
    let config = SmoConfig { c: best.c, gamma: best.gamma, tol: spec.tol, max_iter: 0, seed: spec.seed };
    Ok(train_smo(xs, ys, &config)?)
}

/// Files staged in a scratch directory and moved into place at the end.
struct Staging {
    dir: PathBuf,
    target: PathBuf,
    files: Vec<(String, String)>,
    done: bool,
}

impl Staging {
    fn new(target: &Path) -> Result<Self> {
        std::fs::create_dir_all(target).map_err(|e| CliError::io(target, e))?;
        let dir = target.join(format!(".staging-{}", std::process::id()));
        if dir.exists() {
            std::fs::remove_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        }
        std::fs::create_dir(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self { dir, target: target.to_path_buf(), files: Vec::new(), done: false })
    }

    /// Stages `bytes` as `file`; returns its digest.
    fn put(&mut self, file: &str, bytes: &[u8]) -> Result<String> {
        let path = self.dir.join(file);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        let digest = sha256_hex(bytes);
        self.files.push((file.to_string(), digest.clone()));
        Ok(digest)
    }

    fn commit(mut self, manifest: &[u8]) -> Result<()> {
        let old = self.target.join(MANIFEST);
        if old.exists() {
            std::fs::remove_file(&old).map_err(|e| CliError::io(&old, e))?;
        }
        for (file, _) in &self.files {
            let (from, to) = (self.dir.join(file), self.target.join(file));
            std::fs::rename(&from, &to).map_err(|e| CliError::io(&to, e))?;
        }
        write_atomic(&self.target.join(MANIFEST), manifest)?;
        std::fs::remove_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        self.done = true;
        Ok(())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.done {
            let _ = std::fs::remove_dir_all(&self.dir);
        }
    }
}

/// Summary of a finished training run.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub manifest: Manifest,
    pub history: Option<TrainingHistory>,
    pub cv: GridResult,
}

/// Fits every model in order: TF.IDF, the attention network on a
/// train/dev split, task embeddings, the feature matrix with its scaler,
/// and the grid-searched SVM. Nothing is written unless all stages succeed.
pub fn train(cfg: &PipelineConfig, rt: Runtime) -> Result<TrainOutcome> {
    cfg.validate(Needs::Train)?;
    let meta = meta(cfg);
    let groups = cfg.group_set()?;
    let schema = FeatureSchema::new(groups.clone());
    let d = training_set(cfg).stage("load")?;
    let articles: Vec<&Article> = d.articles().collect();
    let ys = fake_targets(&d);

    let Resources { mut models, inputs } = load_resources(cfg, &groups).stage("resources")?;
    if groups.contains(FeatureGroup::Tfidf) {
        models.tfidf = Some(fit_tfidf(&d, &tfidf_config(cfg)).stage("tfidf")?);
    }

    let mut network = None;
    let mut task = None;
    if groups.contains(FeatureGroup::TaskEmbedding) {
        let vectors = models.vectors.as_ref().expect("loaded with the attnn group");
        let (params, history) = train_network_stage(rt, cfg, &d, vectors).stage("network")?;
        task = Some(network_outputs(rt, &params, &cfg.network(), vectors, &articles));
        network = Some((params, history));
    }

    let raw = assemble_all(rt, &models, &schema, &articles, task.as_deref()).stage("features")?;
    let scaler = fit_scaler(&raw).stage("features")?;
    let xs = scaler.apply_all(&raw).stage("features")?;
    let spec = cfg.grid();
    let cv = grid_search(rt, &xs, &ys, &spec).stage("svm")?;
    log::info!("svm: C={} gamma={} (cv accuracy {:.4})", cv.best.c, cv.best.gamma, cv.best.accuracy);
    let svm = final_svm(&xs, &ys, &spec, &cv.best).stage("svm")?;

    let schema_hash = schema.hash();
    let write = || -> Result<Manifest> {
        let mut staging = Staging::new(&cfg.model_dir)?;
        let mut artifacts = Vec::new();
        let mut put = |staging: &mut Staging, name: &str, file: &str, bytes: Vec<u8>| -> Result<()> {
            let sha256 = staging.put(file, &bytes)?;
            artifacts.push(ManifestEntry { name: name.into(), path: file.into(), sha256 });
            Ok(())
        };
        if let Some(model) = &models.tfidf {
            let a = TfidfArtifact { schema_version: SCHEMA_VERSION, meta: meta.clone(), model: model.clone() };
            put(&mut staging, "tfidf", TFIDF_FILE, artifacts::to_json(&a))?;
        }
        let f = FeaturesArtifact {
            schema_version: SCHEMA_VERSION,
            meta: meta.clone(),
            schema_hash: schema_hash.clone(),
            schema: schema.clone(),
            scaler: scaler.clone(),
        };
        put(&mut staging, "features", FEATURES_FILE, artifacts::to_json(&f))?;
        if let Some((params, history)) = &network {
            let header = ParamsHeader { meta: meta.clone(), network: cfg.network() };
            put(&mut staging, "network", NETWORK_FILE, params::encode(&header, params))?;
            put(&mut staging, "history", HISTORY_FILE, tables::history_csv(&meta, history).into_bytes())?;
        }
        let s = SvmArtifact {
            schema_version: SCHEMA_VERSION,
            meta: meta.clone(),
            schema_hash: schema_hash.clone(),
            model: svm.clone(),
            grid: cv.clone(),
        };
        put(&mut staging, "svm", SVM_FILE, artifacts::to_json(&s))?;

        let mut outputs = Vec::new();
        if cfg.export_features {
            let csv = tables::features_csv(&meta, &schema, &raw, &ys);
            let sha256 = staging.put(TRAIN_FEATURES_FILE, csv.as_bytes())?;
            outputs.push(ManifestEntry { name: "train_features".into(), path: TRAIN_FEATURES_FILE.into(), sha256 });
        }
        let inputs = inputs
            .iter()
            .map(|(name, path)| Ok(ManifestEntry { name: name.clone(), path: path.clone(), sha256: sha256_file(path)? }))
            .collect::<Result<Vec<_>>>()?;
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            meta: meta.clone(),
            groups: groups.to_string(),
            schema_hash: schema_hash.clone(),
            artifacts,
            inputs,
            outputs,
        };
        staging.commit(&artifacts::to_json(&manifest))?;
        Ok(manifest)
    };
    let manifest = write().stage("write")?;
    Ok(TrainOutcome { manifest, history: network.map(|(_, h)| h), cv })
}

// ------------------------------------------------------------ trained models

/// Everything `train` produced, checked against the configuration.
pub struct TrainedModels {
    pub manifest: Manifest,
    pub schema: FeatureSchema,
    pub features: FeaturesArtifact,
    pub feature_models: FeatureModels,
    pub network: Option<(NetworkParams, NetworkConfig)>,
    pub svm: SvmArtifact,
}

fn expect_meta(path: &Path, found: &ArtifactMeta, expected: &ArtifactMeta) -> Result<()> {
    if found != expected {
        return Err(CliError::Mismatch(format!(
            "{} was produced with config {} and seed {}, the current configuration is {} with seed {}",
            path.display(),
            found.config_hash,
            found.seed,
            expected.config_hash,
            expected.seed
        )));
    }
    Ok(())
}

/// Loads the model directory, refusing files from another configuration,
/// another feature schema or changed resource files.
pub fn load_models(cfg: &PipelineConfig) -> Result<TrainedModels> {
    let dir = &cfg.model_dir;
    let expected = meta(cfg);
    let groups = cfg.group_set()?;
    let schema = FeatureSchema::new(groups.clone());
    let schema_hash = schema.hash();

    let manifest_path = dir.join(MANIFEST);
    let manifest: Manifest = artifacts::read_json(&manifest_path)?;
    expect_meta(&manifest_path, &manifest.meta, &expected)?;
    if manifest.schema_hash != schema_hash {
        return Err(CliError::Mismatch(format!(
            "models were trained on feature groups `{}`, the configuration asks for `{groups}`",
            manifest.groups
        )));
    }
    let artifact = |name: &str| -> Result<PathBuf> {
        let entry = manifest
            .artifacts
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CliError::Mismatch(format!("{} lists no `{name}` artifact", manifest_path.display())))?;
        let path = dir.join(&entry.path);
        if sha256_file(&path)? != entry.sha256 {
            return Err(CliError::Mismatch(format!("{} differs from the manifest", path.display())));
        }
        Ok(path)
    };

    let resources = load_resources(cfg, &groups)?;
    for (name, path) in &resources.inputs {
        let recorded = manifest.inputs.iter().find(|e| &e.name == name).ok_or_else(|| {
            CliError::Mismatch(format!("models were trained without the `{name}` resource"))
        })?;
        if sha256_file(path)? != recorded.sha256 {
            return Err(CliError::Mismatch(format!("{} changed since training", path.display())));
        }
    }
    let mut feature_models = resources.models;

    if groups.contains(FeatureGroup::Tfidf) {
        let path = artifact("tfidf")?;
        let t = artifacts::read_tfidf(&path)?;
        expect_meta(&path, &t.meta, &expected)?;
        feature_models.tfidf = Some(t.model);
    }

    let path = artifact("features")?;
    let features: FeaturesArtifact = artifacts::read_json(&path)?;
    expect_meta(&path, &features.meta, &expected)?;
    if features.schema_hash != schema_hash || features.schema != schema || features.scaler.dim() != schema.len() {
        return Err(CliError::data(
            &path,
            fakenews_core::Error::SchemaMismatch { expected: schema_hash.clone(), found: features.schema_hash.clone() },
        ));
    }

    let network = if groups.contains(FeatureGroup::TaskEmbedding) {
        let path = artifact("network")?;
        let bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        let (header, params) = params::decode(&bytes).map_err(|m| CliError::format(&path, m))?;
        expect_meta(&path, &header.meta, &expected)?;
        Some((params, header.network))
    } else {
        None
    };

    let path = artifact("svm")?;
    let svm: SvmArtifact = artifacts::read_json(&path)?;
    expect_meta(&path, &svm.meta, &expected)?;
    if svm.schema_hash != schema_hash || svm.model.dim().is_some_and(|d| d != schema.len()) {
        return Err(CliError::data(
            &path,
            fakenews_core::Error::SchemaMismatch { expected: schema_hash, found: svm.schema_hash.clone() },
        ));
    }
    Ok(TrainedModels { manifest, schema, features, feature_models, network, svm })
}

impl TrainedModels {
    /// Unscaled feature rows plus the network's fake probability (if any).
    pub fn features(&self, rt: Runtime, articles: &[&Article]) -> Result<(Vec<Vec<f64>>, Option<Vec<f64>>)> {
        let task = self.network.as_ref().map(|(params, net)| {
            let vectors = self.feature_models.vectors.as_ref().expect("loaded with the attnn group");
            network_outputs(rt, params, net, vectors, articles)
        });
        let rows = assemble_all(rt, &self.feature_models, &self.schema, articles, task.as_deref())?;
        Ok((rows, task.map(|t| t.into_iter().map(|(_, p)| p).collect())))
    }

    /// SVM label (+1 fake) and decision value per unscaled row.
    pub fn classify(&self, rows: &[Vec<f64>]) -> Result<Vec<(i8, f64)>> {
        rows.iter()
            .map(|r| Ok(self.svm.model.predict(&self.features.scaler.apply(r)?)?))
            .collect()
    }
}

// --------------------------------------------------------------- evaluate

fn test_path(cfg: &PipelineConfig) -> Result<&Path> {
    cfg.test.as_deref().ok_or_else(|| CliError::Config("`test` is not set".into()))
}

fn write_report(cfg: &PipelineConfig, path: &Path, rows: &[ReportRow]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    write_atomic(path, tables::report_csv(&meta(cfg), rows).as_bytes())
}

/// Scores the trained pipeline (or only the majority baseline) on the
/// test set and writes the report CSV.
pub fn evaluate(cfg: &PipelineConfig, rt: Runtime, baseline_only: bool) -> Result<Vec<ReportRow>> {
    cfg.validate(Needs::Evaluate { baseline_only })?;
    let train = training_set(cfg)?;
    let test = load_labeled(test_path(cfg)?, false)?;
    let mut rows = vec![ReportRow { label: "Baseline".into(), metrics: majority_baseline(&train, &test)?, grid: None }];
    if !baseline_only {
        let models = load_models(cfg)?;
        let articles: Vec<&Article> = test.articles().collect();
        let (raw, _) = models.features(rt, &articles)?;
        let preds: Vec<i8> = models.classify(&raw)?.into_iter().map(|(y, _)| y).collect();
        let metrics: Metrics = macro_metrics(&confusion(&preds, &fake_targets(&test))?)?;
        let label = AblationSubset::parse(&cfg.groups)?.label().to_string();
        rows.push(ReportRow { label, metrics, grid: Some(models.svm.grid.clone()) });
    }
    write_report(cfg, &cfg.report_path(), &rows)?;
    Ok(rows)
}

/// Re-derives training and test features from the trained models and
/// runs every configured ablation row; rows are evaluated in parallel.
pub fn ablate(cfg: &PipelineConfig, rt: Runtime) -> Result<Vec<ReportRow>> {
    cfg.validate(Needs::Evaluate { baseline_only: false })?;
    let subsets = cfg.ablation_subsets()?;
    let train = training_set(cfg)?;
    let test = load_labeled(test_path(cfg)?, false)?;
    let models = load_models(cfg)?;
    let train_articles: Vec<&Article> = train.articles().collect();
    let test_articles: Vec<&Article> = test.articles().collect();
    let (train_x, _) = models.features(rt, &train_articles)?;
    let (test_x, _) = models.features(rt, &test_articles)?;
    let (train_y, test_y) = (fake_targets(&train), fake_targets(&test));
    let data = AblationData { schema: &models.schema, train_x: &train_x, train_y: &train_y, test_x: &test_x, test_y: &test_y };
    let spec = cfg.grid();
    let rows = rt
        .threads
        .map(&subsets, |s| ablation_run(&data, std::slice::from_ref(s), &spec))
        .into_iter()
        .collect::<fakenews_core::Result<Vec<Vec<ReportRow>>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let path = cfg.report_path().with_file_name("ablation.csv");
    write_report(cfg, &path, &rows)?;
    Ok(rows)
}

// ----------------------------------------------------------------- predict

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: u64,
    pub fake_prediction: bool,
    pub decision_value: f64,
    pub nn_probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PredictSummary {
    pub written: usize,
    pub skipped: usize,
}

/// Streams one JSON line per readable input article, in input order.
/// `id` is the article's 0-based line number; malformed lines are skipped.
pub fn predict(cfg: &PipelineConfig, rt: Runtime, input: &Path, out: &mut dyn Write) -> Result<PredictSummary> {
    cfg.validate(Needs::Predict)?;
    let models = load_models(cfg)?;
    let loaded = dataset::load_dataset_lenient(input)?;
    let articles: Vec<&Article> = loaded.items.iter().map(|(_, item)| &item.article).collect();
    let (raw, probs) = models.features(rt, &articles)?;
    let labels = models.classify(&raw)?;
    let io = |e| CliError::io("<output>", e);
    for (i, ((id, _), (label, decision))) in loaded.items.iter().zip(labels).enumerate() {
        let p = Prediction {
            id: *id,
            fake_prediction: label > 0,
            decision_value: decision,
            nn_probability: probs.as_ref().map(|p| p[i]),
        };
        serde_json::to_writer(&mut *out, &p).map_err(|e| io(e.into()))?;
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)?;
    if loaded.skipped > 0 {
        log::warn!("{}: skipped {} malformed lines", input.display(), loaded.skipped);
    }
    Ok(PredictSummary { written: loaded.items.len(), skipped: loaded.skipped })
}
