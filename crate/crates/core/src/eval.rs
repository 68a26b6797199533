//! Confusion counts, macro-averaged metrics, the majority-class baseline and
//! the feature-group ablation harness.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::features::{fit_scaler, FeatureGroup, FeatureSchema, GroupSet};
use crate::svm::{grid_search_cv, train_smo, GridResult, GridSearchSpec, SmoConfig};
use crate::{Error, Result};

/// Counts with fake (+1) as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// The same predictions seen with the classes swapped.
    pub fn swapped(&self) -> Self {
        Self { tp: self.tn, fp: self.fn_, tn: self.tp, fn_: self.fp }
    }
}

pub fn confusion(preds: &[i8], gold: &[i8]) -> Result<ConfusionCounts> {
    if preds.len() != gold.len() {
        return Err(Error::DimensionMismatch { expected: gold.len(), found: preds.len() });
    }
    let mut c = ConfusionCounts::default();
    for (&p, &g) in preds.iter().zip(gold) {
        if !matches!(p, 1 | -1) || !matches!(g, 1 | -1) {
            return Err(Error::InvalidParameter(format!("labels must be ±1, got {p} / {g}")));
        }
        match (p > 0, g > 0) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Percentages. `undefined` is set when some per-class precision, recall
/// or F1 had a zero denominator and was counted as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub undefined: bool,
}

fn ratio(num: u64, den: u64, undefined: &mut bool) -> f64 {
    if den == 0 {
        *undefined = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_scores(tp: u64, fp: u64, fn_: u64, undefined: &mut bool) -> (f64, f64, f64) {
    let p = ratio(tp, tp + fp, undefined);
    let r = ratio(tp, tp + fn_, undefined);
    let f = if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        *undefined = true;
        0.0
    };
    (p, r, f)
}

/// Unweighted means over the fake and non-fake classes.
pub fn macro_metrics(c: &ConfusionCounts) -> Result<Metrics> {
    if c.total() == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut undefined = false;
    let (p1, r1, f1) = class_scores(c.tp, c.fp, c.fn_, &mut undefined);
    let (p0, r0, f0) = class_scores(c.tn, c.fn_, c.fp, &mut undefined);
    if undefined {
        log::warn!("undefined per-class metric counted as 0 for {c:?}");
    }
    Ok(Metrics {
        precision: 50.0 * (p1 + p0),
        recall: 50.0 * (r1 + r0),
        f1: 50.0 * (f1 + f0),
        accuracy: 100.0 * (c.tp + c.tn) as f64 / c.total() as f64,
        undefined,
    })
}

/// Predicts the training majority (fake on ties) for every test article.
pub fn majority_baseline(train: &Dataset, test: &Dataset) -> Result<Metrics> {
    let train_y = train.fake_targets()?;
    let gold = test.fake_targets()?;
    if train_y.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let fake = train_y.iter().filter(|&&y| y > 0).count();
    let majority = if 2 * fake >= train_y.len() { 1 } else { -1 };
    let preds = alloc::vec![majority; gold.len()];
    macro_metrics(&confusion(&preds, &gold)?)
}

/// One row of an ablation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AblationSubset {
    Baseline,
    Groups { label: String, groups: GroupSet },
}

impl AblationSubset {
    /// Parses `baseline` or a `+`-joined group list such as
    /// `tfidf+feats+attnn`; the label reads like `TF.IDF & Feats & AttNN`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("baseline") {
            return Ok(AblationSubset::Baseline);
        }
        let groups: GroupSet = spec.parse()?;
        let label = spec
            .split(['+', ','])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s.to_lowercase().as_str() {
                "tfidf" | "tf.idf" | "lexical" => "TF.IDF".to_string(),
                "attnn" | "task_embedding" => "AttNN".to_string(),
                "feats" => "Feats".to_string(),
                _ => s.to_string(),
            })
            .collect::<Vec<_>>()
            .join(" & ");
        Ok(AblationSubset::Groups { label, groups })
    }

    pub fn label(&self) -> &str {
        match self {
            AblationSubset::Baseline => "Baseline",
            AblationSubset::Groups { label, .. } => label,
        }
    }
}

/// Default ablation rows, from the baseline up to the full model.
pub const DEFAULT_ABLATION: [&str; 5] = ["baseline", "tfidf", "attnn", "tfidf+attnn", "tfidf+feats+attnn"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub metrics: Metrics,
    /// Selected (C, γ); absent for the baseline.
    pub grid: Option<GridResult>,
}

/// Feature matrices aligned to `schema`, with ±1 fake targets.
#[derive(Debug, Clone, Copy)]
pub struct AblationData<'a> {
    pub schema: &'a FeatureSchema,
    pub train_x: &'a [Vec<f64>],
    pub train_y: &'a [i8],
    pub test_x: &'a [Vec<f64>],
    pub test_y: &'a [i8],
}

fn select(rows: &[Vec<f64>], cols: &[usize]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect()
}

/// Evaluates one subset: max-abs scaling fitted on train, grid search,
/// final SVM on all of train, metrics on test.
pub fn evaluate_subset(data: &AblationData<'_>, subset: &AblationSubset, grid: &GridSearchSpec) -> Result<ReportRow> {
    let groups = match subset {
        AblationSubset::Baseline => {
            let fake = data.train_y.iter().filter(|&&y| y > 0).count();
            let majority = if 2 * fake >= data.train_y.len() { 1 } else { -1 };
            let preds = alloc::vec![majority; data.test_y.len()];
            let metrics = macro_metrics(&confusion(&preds, data.test_y)?)?;
            return Ok(ReportRow { label: subset.label().into(), metrics, grid: None });
        }
        AblationSubset::Groups { groups, .. } => groups,
    };
    let cols = data.schema.columns_for(groups)?;
    let train = select(data.train_x, &cols);
    let test = select(data.test_x, &cols);
    let scaler = fit_scaler(&train)?;
    let train = scaler.apply_all(&train)?;
    let test = scaler.apply_all(&test)?;
    let result = grid_search_cv(&train, data.train_y, grid)?;
    let model = train_smo(
        &train,
        data.train_y,
        &SmoConfig { c: result.best.c, gamma: result.best.gamma, tol: grid.tol, max_iter: 0, seed: grid.seed },
    )?;
    let preds = test.iter().map(|x| model.predict(x).map(|p| p.0)).collect::<Result<Vec<i8>>>()?;
    let metrics = macro_metrics(&confusion(&preds, data.test_y)?)?;
    Ok(ReportRow { label: subset.label().into(), metrics, grid: Some(result) })
}

pub fn ablation_run(data: &AblationData<'_>, subsets: &[AblationSubset], grid: &GridSearchSpec) -> Result<Vec<ReportRow>> {
    subsets.iter().map(|s| evaluate_subset(data, s, grid)).collect()
}

/// True when `subset` needs the task-embedding columns.
pub fn needs_task_embedding(subset: &AblationSubset) -> bool {
    matches!(subset, AblationSubset::Groups { groups, .. } if groups.contains(FeatureGroup::TaskEmbedding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Labels;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn counting() {
        let gold = [1, 1, 1, 1, 1, 1, 1, -1, -1, -1];
        assert_eq!(confusion(&[1; 10], &gold).unwrap(), ConfusionCounts { tp: 7, fp: 3, tn: 0, fn_: 0 });
        let perfect = confusion(&gold, &gold).unwrap();
        assert_eq!((perfect.fp, perfect.fn_), (0, 0));
        let inverted: Vec<i8> = gold.iter().map(|g| -g).collect();
        let inv = confusion(&inverted, &gold).unwrap();
        assert_eq!((inv.tp, inv.tn), (0, 0));
        assert!(confusion(&[1], &gold).is_err());
        assert!(confusion(&[0], &[1]).is_err());
    }

    #[test]
    fn baseline_row_from_prior() {
        // 542 of 761 fake
        let m = macro_metrics(&ConfusionCounts { tp: 542, fp: 219, tn: 0, fn_: 0 }).unwrap();
        close(m.precision, 35.61, 0.01);
        close(m.recall, 50.00, 0.01);
        close(m.f1, 41.59, 0.01);
        close(m.accuracy, 71.22, 0.01);
        assert!(m.undefined);
    }

    #[test]
    fn perfect_and_half() {
        let m = macro_metrics(&ConfusionCounts { tp: 5, fp: 0, tn: 5, fn_: 0 }).unwrap();
        assert_eq!((m.precision, m.recall, m.f1, m.accuracy), (100.0, 100.0, 100.0, 100.0));
        assert!(!m.undefined);
        let m = macro_metrics(&ConfusionCounts { tp: 5, fp: 5, tn: 5, fn_: 5 }).unwrap();
        assert_eq!(m.accuracy, 50.0);
        assert!(macro_metrics(&ConfusionCounts::default()).is_err());
    }

    fn dataset(fake: usize, real: usize) -> Dataset {
        let l = |f| Some(Labels { is_fake: f, is_clickbait: f });
        Dataset::from_texts((0..fake).map(|_| ("t", "c", l(true))).chain((0..real).map(|_| ("t", "c", l(false)))))
    }

    #[test]
    fn majority_baseline_cases() {
        let m = majority_baseline(&dataset(7, 3), &dataset(542, 219)).unwrap();
        close(m.accuracy, 71.22, 0.01);
        close(m.f1, 41.59, 0.01);
        let m = majority_baseline(&dataset(7, 3), &dataset(4, 0)).unwrap();
        assert_eq!(m.accuracy, 100.0);
        assert_eq!(m.recall, 50.0);
        assert!(m.undefined);
        let m = majority_baseline(&dataset(2, 5), &dataset(3, 3)).unwrap();
        assert_eq!(m.accuracy, 50.0);
        let unlabeled = Dataset::from_texts([("t", "c", None)]);
        assert!(majority_baseline(&unlabeled, &dataset(1, 1)).is_err());
    }

    #[test]
    fn analytic_baseline_identity_for_random_priors() {
        use rand::Rng;
        let mut rng = crate::seeded_rng(42);
        for _ in 0..20 {
            let n = rng.gen_range(50..2000u64);
            let pos = rng.gen_range(1..n);
            let p = pos as f64 / n as f64;
            let m = macro_metrics(&ConfusionCounts { tp: pos, fp: n - pos, tn: 0, fn_: 0 }).unwrap();
            close(m.accuracy, 100.0 * p, 1e-9);
            close(m.precision, 50.0 * p, 1e-9);
            close(m.recall, 50.0, 1e-9);
            close(m.f1, 100.0 * p / (1.0 + p), 1e-9);
        }
    }

    proptest! {
        #[test]
        fn macro_symmetry_and_micro_recall(tp in 0u64..50, fp in 0u64..50, tn in 0u64..50, fn_ in 0u64..50) {
            let c = ConfusionCounts { tp, fp, tn, fn_ };
            prop_assume!(c.total() > 0);
            let a = macro_metrics(&c).unwrap();
            let b = macro_metrics(&c.swapped()).unwrap();
            prop_assert!((a.precision - b.precision).abs() < 1e-9);
            prop_assert!((a.recall - b.recall).abs() < 1e-9);
            prop_assert!((a.f1 - b.f1).abs() < 1e-9);
            prop_assert!((a.accuracy - b.accuracy).abs() < 1e-9);
            let micro_recall = 100.0 * (tp + tn) as f64 / ((tp + fn_) + (tn + fp)) as f64;
            prop_assert!((a.accuracy - micro_recall).abs() < 1e-9);
            for v in [a.precision, a.recall, a.f1, a.accuracy] {
                prop_assert!((0.0..=100.0).contains(&v));
            }
        }
    }

    #[test]
    fn subset_labels() {
        let rows: Vec<String> =
            DEFAULT_ABLATION.iter().map(|s| AblationSubset::parse(s).unwrap().label().to_string()).collect();
        assert_eq!(rows, ["Baseline", "TF.IDF", "AttNN", "TF.IDF & AttNN", "TF.IDF & Feats & AttNN"]);
        assert!(AblationSubset::parse("tfidf+bogus").is_err());
        assert!(needs_task_embedding(&AblationSubset::parse("tfidf+attnn").unwrap()));
        assert!(!needs_task_embedding(&AblationSubset::Baseline));
    }

    #[test]
    fn ablation_rows_follow_subsets() {
        let schema = FeatureSchema::new("readability+orthographic".parse().unwrap());
        let mut train_x = Vec::new();
        let mut train_y = Vec::new();
        for i in 0..40 {
            let y: i8 = if i % 2 == 0 { 1 } else { -1 };
            let mut row = vec![0.0; 16];
            row[0] = f64::from(y) * 2.0 + (i as f64 * 0.37).sin() * 0.2;
            row[5] = (i as f64 * 1.3).cos();
            train_x.push(row);
            train_y.push(y);
        }
        let data = AblationData { schema: &schema, train_x: &train_x, train_y: &train_y, test_x: &train_x, test_y: &train_y };
        let grid = GridSearchSpec { c_grid: vec![1.0], gamma_grid: vec![0.1], folds: 2, ..GridSearchSpec::default() };
        let subsets = [AblationSubset::Baseline, AblationSubset::parse("readability").unwrap()];
        let rows = ablation_run(&data, &subsets, &grid).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].metrics.accuracy, 50.0);
        assert_eq!(rows[1].label, "readability");
        assert_eq!(rows[1].metrics.accuracy, 100.0);
        let single = ablation_run(&data, &subsets[1..], &grid).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0], rows[1]);
        let bad = [AblationSubset::parse("tfidf").unwrap()];
        assert!(ablation_run(&data, &bad, &grid).is_err());
    }
}
