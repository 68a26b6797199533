//! Articles, labels and dataset-level bookkeeping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::textproc::tokenize;
use crate::{seeded_rng, Error, Result};

/// A news item. `url` and `date` are kept for provenance only; no feature
/// reads them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: u64,
    pub url: String,
    pub date: String,
    pub title: String,
    pub content: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub is_fake: bool,
    pub is_clickbait: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Fake,
    Clickbait,
}

impl Labels {
    pub fn get(&self, kind: LabelKind) -> bool {
        match kind {
            LabelKind::Fake => self.is_fake,
            LabelKind::Clickbait => self.is_clickbait,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub article: Article,
    pub labels: Option<Labels>,
}

/// Ordered collection of articles with optional labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    items: Vec<Item>,
}

impl Dataset {
    pub fn new(items: Vec<Item>) -> Self {
        Self { items }
    }

    /// Builds a dataset from `(title, content, labels)` triples with ids
    /// assigned in order.
    pub fn from_texts<I, T, C>(rows: I) -> Self
    where
        I: IntoIterator<Item = (T, C, Option<Labels>)>,
        T: Into<String>,
        C: Into<String>,
    {
        let items = rows
            .into_iter()
            .enumerate()
            .map(|(i, (title, content, labels))| Item {
                article: Article {
                    id: i as u64,
                    url: String::new(),
                    date: String::new(),
                    title: title.into(),
                    content: content.into(),
                },
                labels,
            })
            .collect();
        Self { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn articles(&self) -> impl Iterator<Item = &Article> {
        self.items.iter().map(|i| &i.article)
    }

    /// Labels of every item, failing on the first unlabeled one.
    pub fn labels(&self) -> Result<Vec<Labels>> {
        self.items
            .iter()
            .enumerate()
            .map(|(index, item)| item.labels.ok_or(Error::Unlabeled { index }))
            .collect()
    }

    /// Fake-news labels as `+1` (fake) / `-1` (not fake).
    pub fn fake_targets(&self) -> Result<Vec<i8>> {
        Ok(self.labels()?.iter().map(|l| if l.is_fake { 1 } else { -1 }).collect())
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.items.iter().all(|i| i.labels.is_some())
    }

    /// Items at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset { items: indices.iter().map(|&i| self.items[i].clone()).collect() }
    }
}

/// Lowercase, strip punctuation, collapse whitespace.
pub fn normalize_title(title: &str) -> String {
    let toks = tokenize(title);
    let mut out = String::with_capacity(title.len());
    for (i, w) in toks.lowers().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateGroup {
    /// Title of the first occurrence.
    pub title: String,
    pub normalized: String,
    pub count: usize,
    pub fake: usize,
    pub clickbait: usize,
    pub unlabeled: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DupReport {
    /// Groups with more than one occurrence, in order of first appearance.
    pub groups: Vec<DuplicateGroup>,
}

impl DupReport {
    pub fn max_reposts(&self) -> usize {
        self.groups.iter().map(|g| g.count).max().unwrap_or(0)
    }

    /// Number of items, across all groups, that have at least one duplicate.
    pub fn duplicated_items(&self) -> usize {
        self.groups.iter().map(|g| g.count).sum()
    }
}

/// Keeps the first item per normalized title.
pub fn deduplicate_by_title(d: &Dataset, normalizer: impl Fn(&str) -> String) -> (Dataset, DupReport) {
    let mut first: BTreeMap<String, usize> = BTreeMap::new();
    let mut groups: Vec<DuplicateGroup> = Vec::new();
    let mut kept = Vec::new();
    for item in &d.items {
        let key = normalizer(&item.article.title);
        let g = *first.entry(key.clone()).or_insert_with(|| {
            groups.push(DuplicateGroup {
                title: item.article.title.clone(),
                normalized: key,
                count: 0,
                fake: 0,
                clickbait: 0,
                unlabeled: 0,
            });
            kept.push(item.clone());
            groups.len() - 1
        });
        let group = &mut groups[g];
        group.count += 1;
        match item.labels {
            Some(l) => {
                group.fake += usize::from(l.is_fake);
                group.clickbait += usize::from(l.is_clickbait);
            }
            None => group.unlabeled += 1,
        }
    }
    groups.retain(|g| g.count > 1);
    (Dataset { items: kept }, DupReport { groups })
}

/// Seeded shuffle split; `dev` gets `round(n * dev_fraction)` items. Both
/// halves keep the original relative order.
pub fn split_train_dev(d: &Dataset, dev_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(dev_fraction > 0.0 && dev_fraction < 1.0) {
        return Err(Error::invalid("dev_fraction must lie strictly between 0 and 1"));
    }
    let n = d.len();
    let n_dev = libm::round(n as f64 * dev_fraction) as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded_rng(seed));
    let dev_set: BTreeSet<usize> = order[..n_dev].iter().copied().collect();
    let (dev, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| dev_set.contains(i));
    Ok((d.subset(&train), d.subset(&dev)))
}

/// Fraction of items whose fake and click-bait labels agree.
pub fn label_agreement(d: &Dataset) -> Result<f64> {
    let labels = d.labels()?;
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let agree = labels.iter().filter(|l| l.is_fake == l.is_clickbait).count();
    Ok(agree as f64 / labels.len() as f64)
}

/// Fraction of positive items for `kind`.
pub fn class_prior(d: &Dataset, kind: LabelKind) -> Result<f64> {
    let labels = d.labels()?;
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let pos = labels.iter().filter(|l| l.get(kind)).count();
    Ok(pos as f64 / labels.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;

    fn lab(fake: bool, cb: bool) -> Option<Labels> {
        Some(Labels { is_fake: fake, is_clickbait: cb })
    }

    #[test]
    fn dedup_identical_titles() {
        let d = Dataset::from_texts([("Шок!", "a", lab(true, true)), ("Шок!", "b", lab(true, false))]);
        let (out, rep) = deduplicate_by_title(&d, normalize_title);
        assert_eq!(out.len(), 1);
        assert_eq!(out.items()[0].article.content, "a");
        assert_eq!(rep.groups.len(), 1);
        assert_eq!(rep.groups[0].count, 2);
        assert_eq!((rep.groups[0].fake, rep.groups[0].clickbait), (2, 1));
    }

    #[test]
    fn dedup_normalizes_case_and_punctuation() {
        let d = Dataset::from_texts([
            ("Невероятно: учените   откриха!", "x", None),
            ("невероятно учените откриха", "y", None),
            ("Друго", "z", None),
        ]);
        let (out, rep) = deduplicate_by_title(&d, normalize_title);
        assert_eq!(out.len(), 2);
        assert_eq!(rep.groups[0].unlabeled, 2);
    }

    #[test]
    fn dedup_reports_max_reposts() {
        let mut rows = vec![];
        for i in 0..45 {
            rows.push(("Тайнствена находка", format!("v{i}"), lab(i % 3 != 0, true)));
        }
        for i in 0..10 {
            rows.push(("Второ", format!("w{i}"), lab(false, false)));
        }
        rows.push(("Уникално", "u".into(), lab(false, false)));
        let (out, rep) = deduplicate_by_title(&Dataset::from_texts(rows), normalize_title);
        assert_eq!(out.len(), 3);
        assert_eq!(rep.max_reposts(), 45);
        assert_eq!(rep.groups.len(), 2);
        assert_eq!(rep.duplicated_items(), 55);
        assert_eq!(rep.groups[0].fake, 30);
    }

    #[test]
    fn split_sizes_and_determinism() {
        let d = Dataset::from_texts((0..100).map(|i| (format!("t{i}"), "c", None)));
        let (tr, dev) = split_train_dev(&d, 0.2, 7).unwrap();
        assert_eq!((tr.len(), dev.len()), (80, 20));
        let (tr2, dev2) = split_train_dev(&d, 0.2, 7).unwrap();
        assert_eq!((tr, dev), (tr2, dev2));
        assert!(split_train_dev(&Dataset::default(), 0.2, 1).is_err());
        assert!(split_train_dev(&d, 1.0, 1).is_err());
        assert!(split_train_dev(&d, 0.0, 1).is_err());
    }

    #[test]
    fn agreement_and_prior() {
        let all_match = Dataset::from_texts((0..10).map(|i| ("t", "c", lab(i % 2 == 0, i % 2 == 0))));
        assert_eq!(label_agreement(&all_match).unwrap(), 1.0);
        let d = Dataset::from_texts((0..50).map(|i| ("t", "c", lab(true, i != 0))));
        assert!((label_agreement(&d).unwrap() - 0.98).abs() < 1e-15);
        let disagree = Dataset::from_texts((0..4).map(|i| ("t", "c", lab(i % 2 == 0, i % 2 == 1))));
        assert_eq!(label_agreement(&disagree).unwrap(), 0.0);

        let d = Dataset::from_texts((0..2815).map(|i| ("t", "c", lab(i < 1940, i < 1968))));
        let prior = class_prior(&d, LabelKind::Fake).unwrap();
        assert!((prior - 0.6892).abs() < 5e-5, "{prior}");
        assert!((class_prior(&d, LabelKind::Clickbait).unwrap() - 1968.0 / 2815.0).abs() < 1e-15);
        assert_eq!(class_prior(&all_match.subset(&[0, 2]), LabelKind::Fake).unwrap(), 1.0);
        assert_eq!(class_prior(&all_match.subset(&[1, 3]), LabelKind::Fake).unwrap(), 0.0);
    }

    #[test]
    fn unlabeled_items_are_rejected() {
        let d = Dataset::from_texts([("a", "b", lab(true, true)), ("c", "d", None)]);
        assert_eq!(label_agreement(&d), Err(Error::Unlabeled { index: 1 }));
        assert_eq!(class_prior(&d, LabelKind::Fake), Err(Error::Unlabeled { index: 1 }));
    }

    proptest! {
        #[test]
        fn dedup_is_idempotent(titles in proptest::collection::vec("[абвАБВ !?]{0,6}", 0..30)) {
            let d = Dataset::from_texts(titles.iter().map(|t| (t.as_str(), "c", None)));
            let (once, _) = deduplicate_by_title(&d, normalize_title);
            let (twice, rep) = deduplicate_by_title(&once, normalize_title);
            prop_assert_eq!(&once, &twice);
            prop_assert!(rep.groups.is_empty());
        }

        #[test]
        fn split_partitions_ids(n in 1usize..200, frac in 0.01f64..0.99, seed: u64) {
            let d = Dataset::from_texts((0..n).map(|i| (format!("t{i}"), "c", None)));
            let (tr, dev) = split_train_dev(&d, frac, seed).unwrap();
            let mut ids: Vec<u64> = tr.articles().chain(dev.articles()).map(|a| a.id).collect();
            ids.sort_unstable();
            prop_assert_eq!(ids, (0..n as u64).collect::<Vec<_>>());
            prop_assert_eq!(dev.len(), libm::round(n as f64 * frac) as usize);
        }
    }
}
