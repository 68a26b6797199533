use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CONTENT_VOCAB_CAP, TITLE_VOCAB_CAP};
use crate::resources::{PmiClass, StaticKind, TermKind};
use crate::textproc::PosTag;
use crate::{Error, Result};

pub const EMBEDDING_DIM: usize = 300;
pub const TASK_EMBEDDING_DIM: usize = 128;

/// Feature groups in vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureGroup {
    Pmi,
    Readability,
    Orthographic,
    Irregular,
    Tfidf,
    Grammatical,
    Embedding,
    TaskEmbedding,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 8] = [
        FeatureGroup::Pmi,
        FeatureGroup::Readability,
        FeatureGroup::Orthographic,
        FeatureGroup::Irregular,
        FeatureGroup::Tfidf,
        FeatureGroup::Grammatical,
        FeatureGroup::Embedding,
        FeatureGroup::TaskEmbedding,
    ];

    pub fn size(self) -> usize {
        match self {
            FeatureGroup::Pmi => 48,
            FeatureGroup::Readability => 4,
            FeatureGroup::Orthographic => 12,
            FeatureGroup::Irregular => 4,
            FeatureGroup::Tfidf => CONTENT_VOCAB_CAP + TITLE_VOCAB_CAP,
            FeatureGroup::Grammatical => 20,
            FeatureGroup::Embedding => 2 * EMBEDDING_DIM + 1,
            FeatureGroup::TaskEmbedding => TASK_EMBEDDING_DIM,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureGroup::Pmi => "pmi",
            FeatureGroup::Readability => "readability",
            FeatureGroup::Orthographic => "orthographic",
            FeatureGroup::Irregular => "irregular",
            FeatureGroup::Tfidf => "tfidf",
            FeatureGroup::Grammatical => "grammatical",
            FeatureGroup::Embedding => "embedding",
            FeatureGroup::TaskEmbedding => "attnn",
        }
    }

    fn names(self) -> Vec<String> {
        let p = self.as_str();
        match self {
            FeatureGroup::Pmi => {
                let mut out = Vec::with_capacity(48);
                for kind in TermKind::ALL {
                    for field in ["title", "body"] {
                        for class in PmiClass::ALL {
                            for stat in ["sum", "avg"] {
                                out.push(format!("{p}.{kind}.{field}.{}.{stat}", class.as_str()));
                            }
                        }
                    }
                }
                out
            }
            FeatureGroup::Readability => ["ttr", "avg_word_len", "flesch_kincaid", "gunning_fog"]
                .iter()
                .map(|n| format!("{p}.{n}"))
                .collect(),
            FeatureGroup::Orthographic => [
                "words.title",
                "words.content",
                "chars.title",
                "chars.content",
                "symbols.title",
                "symbols.content",
                "capitals.title",
                "capitals.content",
                "capital_fraction.title",
                "capital_fraction.content",
                "urls.content",
                "title_content_overlap",
            ]
            .iter()
            .map(|n| format!("{p}.{n}"))
            .collect(),
            FeatureGroup::Irregular => StaticKind::ALL.iter().map(|k| format!("{p}.{}", k.as_str())).collect(),
            FeatureGroup::Tfidf => (0..CONTENT_VOCAB_CAP)
                .map(|i| format!("{p}.content.{i:03}"))
                .chain((0..TITLE_VOCAB_CAP).map(|i| format!("{p}.title.{i:03}")))
                .collect(),
            FeatureGroup::Grammatical => ["title", "content"]
                .iter()
                .flat_map(|field| PosTag::ALL.iter().map(move |t| format!("{p}.{field}.{}", t.as_str().to_lowercase())))
                .collect(),
            FeatureGroup::Embedding => (0..EMBEDDING_DIM)
                .map(|i| format!("{p}.title.{i:03}"))
                .chain((0..EMBEDDING_DIM).map(|i| format!("{p}.content.{i:03}")))
                .chain(core::iter::once(format!("{p}.title_content_cosine")))
                .collect(),
            FeatureGroup::TaskEmbedding => (0..TASK_EMBEDDING_DIM).map(|i| format!("{p}.{i:03}")).collect(),
        }
    }

    fn is_handcrafted(self) -> bool {
        self != FeatureGroup::TaskEmbedding
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of feature groups, always iterated in vector order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSet(BTreeSet<FeatureGroup>);

impl GroupSet {
    pub fn all() -> Self {
        Self(FeatureGroup::ALL.into_iter().collect())
    }

    /// Every group except the task embedding.
    pub fn handcrafted() -> Self {
        Self(FeatureGroup::ALL.into_iter().filter(|g| g.is_handcrafted()).collect())
    }

    pub fn only(groups: impl IntoIterator<Item = FeatureGroup>) -> Self {
        Self(groups.into_iter().collect())
    }

    pub fn contains(&self, g: FeatureGroup) -> bool {
        self.0.contains(&g)
    }

    pub fn iter(&self) -> impl Iterator<Item = FeatureGroup> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(mut self, g: FeatureGroup) -> Self {
        self.0.insert(g);
        self
    }

    pub fn without(mut self, g: FeatureGroup) -> Self {
        self.0.remove(&g);
        self
    }

    pub fn is_subset(&self, other: &GroupSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(FeatureGroup::as_str).collect();
        f.write_str(&names.join("+"))
    }
}

/// Parses `+`- or `,`-separated group names. Besides the individual groups
/// it accepts the aliases `lexical` (tfidf), `stylometric` (pmi,
/// readability, orthographic, irregular), `semantic`/`embeddings`
/// (embedding), `feats` (all hand-crafted groups but tfidf), `handcrafted`
/// and `all`.
impl FromStr for GroupSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use FeatureGroup::*;
        let mut set = BTreeSet::new();
        for name in s.split(['+', ',']).map(str::trim).filter(|n| !n.is_empty()) {
            let groups: &[FeatureGroup] = match name.to_lowercase().as_str() {
                "pmi" => &[Pmi],
                "readability" => &[Readability],
                "orthographic" => &[Orthographic],
                "irregular" => &[Irregular],
                "tfidf" | "tf.idf" | "lexical" => &[Tfidf],
                "grammatical" => &[Grammatical],
                "embedding" | "embeddings" | "semantic" => &[Embedding],
                "attnn" | "task_embedding" => &[TaskEmbedding],
                "stylometric" => &[Pmi, Readability, Orthographic, Irregular],
                "feats" => &[Pmi, Readability, Orthographic, Irregular, Grammatical, Embedding],
                "handcrafted" => &[Pmi, Readability, Orthographic, Irregular, Tfidf, Grammatical, Embedding],
                "all" => &FeatureGroup::ALL,
                _ => return Err(Error::UnknownGroup(name.to_string())),
            };
            set.extend(groups.iter().copied());
        }
        if set.is_empty() {
            return Err(Error::UnknownGroup(s.to_string()));
        }
        Ok(Self(set))
    }
}

/// Ordered feature names for a group selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    groups: GroupSet,
    names: Vec<String>,
}

impl FeatureSchema {
    pub fn new(groups: GroupSet) -> Self {
        let names = groups.iter().flat_map(FeatureGroup::names).collect();
        Self { groups, names }
    }

    pub fn groups(&self) -> &GroupSet {
        &self.groups
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Column range of `group` inside this schema.
    pub fn range_of(&self, group: FeatureGroup) -> Option<core::ops::Range<usize>> {
        let mut start = 0;
        for g in self.groups.iter() {
            if g == group {
                return Some(start..start + g.size());
            }
            start += g.size();
        }
        None
    }

    /// Column indices covering `subset`, which must be part of this schema.
    pub fn columns_for(&self, subset: &GroupSet) -> Result<Vec<usize>> {
        let mut cols = Vec::new();
        for g in subset.iter() {
            let range = self.range_of(g).ok_or_else(|| Error::Missing(format!("feature group `{g}`")))?;
            cols.extend(range);
        }
        Ok(cols)
    }

    /// Hex SHA-256 of the ordered names.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for n in &self.names {
            h.update(n.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_sizes_add_up() {
        assert_eq!(FeatureSchema::new(GroupSet::handcrafted()).len(), 1789);
        assert_eq!(FeatureSchema::new(GroupSet::all()).len(), 1917);
        assert_eq!(48 + 4 + 12 + 4 + 1100 + 20 + 601 + 128, 1917);
        assert_eq!(FeatureSchema::new("tfidf".parse().unwrap()).len(), 1100);
    }

    #[test]
    fn names_unique_and_stable() {
        let s = FeatureSchema::new(GroupSet::all());
        let unique: BTreeSet<&String> = s.names().iter().collect();
        assert_eq!(unique.len(), s.len());
        assert_eq!(s.hash(), FeatureSchema::new(GroupSet::all()).hash());
        assert_ne!(s.hash(), FeatureSchema::new(GroupSet::handcrafted()).hash());
        assert_eq!(s.names()[0], "pmi.unigram.title.fake.sum");
        assert_eq!(s.names()[1916], "attnn.127");
    }

    #[test]
    fn parses_group_names() {
        let g: GroupSet = "tfidf+feats+attnn".parse().unwrap();
        assert_eq!(g, GroupSet::all());
        let g: GroupSet = "attnn, tfidf".parse().unwrap();
        assert_eq!(g.to_string(), "tfidf+attnn");
        assert_eq!("bogus".parse::<GroupSet>(), Err(Error::UnknownGroup("bogus".into())));
        assert!("".parse::<GroupSet>().is_err());
    }

    #[test]
    fn column_ranges() {
        let s = FeatureSchema::new(GroupSet::all());
        assert_eq!(s.range_of(FeatureGroup::Tfidf), Some(68..1168));
        let cols = s.columns_for(&"readability+attnn".parse().unwrap()).unwrap();
        assert_eq!(cols.len(), 132);
        assert_eq!(cols[0], 48);
        let small = FeatureSchema::new("tfidf".parse().unwrap());
        assert!(small.columns_for(&GroupSet::all()).is_err());
    }
}
