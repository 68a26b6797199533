//! PMI fact-checking lexicons and the static word lists.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Article, Dataset, Labels};
use crate::textproc::{extract_named_entities, tokenize, LanguageProfile, TokenSequence};
use crate::{Error, Result};

pub const DEFAULT_MIN_DF: usize = 5;
pub const DEFAULT_SMOOTHING: f64 = 0.5;
const LEXICON_MAGIC: &str = "# scored-lexicon";
const LEXICON_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TermKind {
    Unigram,
    Bigram,
    NamedEntity,
}

impl TermKind {
    pub const ALL: [TermKind; 3] = [TermKind::Unigram, TermKind::Bigram, TermKind::NamedEntity];

    pub fn as_str(self) -> &'static str {
        match self {
            TermKind::Unigram => "unigram",
            TermKind::Bigram => "bigram",
            TermKind::NamedEntity => "named_entity",
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TermKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown term kind `{s}`")))
    }
}

/// The four target classes a term is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PmiClass {
    Fake,
    NonFake,
    Clickbait,
    NonClickbait,
}

impl PmiClass {
    pub const ALL: [PmiClass; 4] = [PmiClass::Fake, PmiClass::NonFake, PmiClass::Clickbait, PmiClass::NonClickbait];

    pub fn as_str(self) -> &'static str {
        match self {
            PmiClass::Fake => "fake",
            PmiClass::NonFake => "non_fake",
            PmiClass::Clickbait => "clickbait",
            PmiClass::NonClickbait => "non_clickbait",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn contains(self, labels: &Labels) -> bool {
        match self {
            PmiClass::Fake => labels.is_fake,
            PmiClass::NonFake => !labels.is_fake,
            PmiClass::Clickbait => labels.is_clickbait,
            PmiClass::NonClickbait => !labels.is_clickbait,
        }
    }
}

impl FromStr for PmiClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PmiClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown class `{s}`")))
    }
}

/// Per-class scores of one term. A class is `None` when the score would be
/// `-inf` (unsmoothed and never co-occurring).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassScores(pub [Option<f64>; 4]);

impl ClassScores {
    pub fn get(&self, class: PmiClass) -> Option<f64> {
        self.0[class.index()]
    }

    fn max(&self) -> f64 {
        self.0.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredLexicon {
    pub kind: TermKind,
    pub entries: BTreeMap<String, ClassScores>,
    pub min_df: usize,
    pub smoothing: f64,
}

/// Terms of one text field, one entry per occurrence.
pub fn field_terms(text: &str, tokens: &TokenSequence, kind: TermKind, profile: &LanguageProfile) -> Vec<String> {
    match kind {
        TermKind::Unigram => tokens.words().map(|t| t.lower.clone()).collect(),
        TermKind::Bigram => {
            let words: Vec<&str> = tokens.words().map(|t| t.lower.as_str()).collect();
            words.windows(2).map(|w| format!("{} {}", w[0], w[1])).collect()
        }
        TermKind::NamedEntity => {
            extract_named_entities(text, profile).into_iter().map(|e| e.to_lowercase()).collect()
        }
    }
}

fn article_term_set(article: &Article, kind: TermKind, profile: &LanguageProfile) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    for text in [&article.title, &article.content] {
        let toks = tokenize(text);
        set.extend(field_terms(text, &toks, kind, profile));
    }
    set
}

/// Document-level PMI of every term against the four classes:
/// `log2(((df(t,c) + k) * N) / ((df(t) + k) * (N_c + k)))`.
pub fn build_pmi_lexicon(
    d: &Dataset,
    kind: TermKind,
    min_df: usize,
    smoothing: f64,
    profile: &LanguageProfile,
) -> Result<ScoredLexicon> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if min_df == 0 {
        return Err(Error::invalid("min_df must be at least 1"));
    }
    if !(smoothing >= 0.0 && smoothing.is_finite()) {
        return Err(Error::invalid("smoothing must be finite and non-negative"));
    }
    let labels = d.labels()?;
    let n = d.len() as f64;
    let mut class_sizes = [0usize; 4];
    for l in &labels {
        for c in PmiClass::ALL {
            class_sizes[c.index()] += usize::from(c.contains(l));
        }
    }

    // term -> (df, per-class df)
    let mut counts: BTreeMap<String, (usize, [usize; 4])> = BTreeMap::new();
    for (article, l) in d.articles().zip(&labels) {
        for term in article_term_set(article, kind, profile) {
            let entry = counts.entry(term).or_default();
            entry.0 += 1;
            for c in PmiClass::ALL {
                entry.1[c.index()] += usize::from(c.contains(l));
            }
        }
    }

    let k = smoothing;
    let mut entries = BTreeMap::new();
    for (term, (df, per_class)) in counts {
        if df < min_df {
            continue;
        }
        let mut scores = ClassScores::default();
        for c in PmiClass::ALL {
            let joint = per_class[c.index()] as f64 + k;
            let denom = (df as f64 + k) * (class_sizes[c.index()] as f64 + k);
            if joint > 0.0 && denom > 0.0 {
                scores.0[c.index()] = Some(libm::log2(joint * n / denom));
            }
        }
        entries.insert(term, scores);
    }
    Ok(ScoredLexicon { kind, entries, min_df, smoothing })
}

impl ScoredLexicon {
    pub fn score(&self, term: &str, class: PmiClass) -> Option<f64> {
        self.entries.get(term).and_then(|s| s.get(class))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Terms ordered by their highest class score, descending, then by term.
    pub fn ranked(&self) -> Vec<(&str, &ClassScores)> {
        let mut rows: Vec<_> = self.entries.iter().map(|(t, s)| (t.as_str(), s)).collect();
        rows.sort_by(|a, b| b.1.max().total_cmp(&a.1.max()).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// Highest-scoring terms for one class.
    pub fn top_terms(&self, class: PmiClass, n: usize) -> Vec<(&str, f64)> {
        let mut rows: Vec<_> =
            self.entries.iter().filter_map(|(t, s)| s.get(class).map(|v| (t.as_str(), v))).collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows.truncate(n);
        rows
    }

    /// TSV form: a version header, then `term<TAB>kind<TAB>class<TAB>score`
    /// rows. Scores use the shortest representation that parses back to the
    /// identical `f64`.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "{LEXICON_MAGIC}\t{LEXICON_VERSION}\tkind={}\tmin_df={}\tsmoothing={}\n",
            self.kind, self.min_df, self.smoothing
        );
        for (term, scores) in self.ranked() {
            for c in PmiClass::ALL {
                if let Some(v) = scores.get(c) {
                    out.push_str(&format!("{term}\t{}\t{}\t{v}\n", self.kind, c.as_str()));
                }
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut kind: Option<TermKind> = None;
        let mut min_df = DEFAULT_MIN_DF;
        let mut smoothing = DEFAULT_SMOOTHING;
        let mut entries: BTreeMap<String, ClassScores> = BTreeMap::new();
        let perr = |line: usize, message: String| Error::Parse { line, message };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix(LEXICON_MAGIC) {
                let mut fields = rest.split('\t').filter(|f| !f.is_empty());
                let version = fields.next().unwrap_or("");
                if version != LEXICON_VERSION {
                    return Err(perr(line_no, format!("unsupported lexicon version `{version}`")));
                }
                for field in fields {
                    let (key, value) =
                        field.split_once('=').ok_or_else(|| perr(line_no, format!("bad header field `{field}`")))?;
                    let bad = |_| perr(line_no, format!("bad header value `{field}`"));
                    match key {
                        "kind" => kind = Some(value.parse().map_err(|_| perr(line_no, format!("bad kind `{value}`")))?),
                        "min_df" => min_df = value.parse().map_err(bad)?,
                        "smoothing" => smoothing = value.parse().map_err(|_| perr(line_no, format!("bad header value `{field}`")))?,
                        _ => {}
                    }
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [term, row_kind, class, score] = cols[..] else {
                return Err(perr(line_no, format!("expected 4 tab-separated fields, found {}", cols.len())));
            };
            let row_kind: TermKind = row_kind.parse().map_err(|_| perr(line_no, format!("bad kind `{row_kind}`")))?;
            match kind {
                None => kind = Some(row_kind),
                Some(k) if k != row_kind => {
                    return Err(perr(line_no, format!("kind `{row_kind}` differs from lexicon kind `{k}`")))
                }
                Some(_) => {}
            }
            let class: PmiClass = class.parse().map_err(|_| perr(line_no, format!("bad class `{class}`")))?;
            let score: f64 = score
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| perr(line_no, format!("non-numeric score `{score}`")))?;
            entries.entry(term.to_string()).or_default().0[class.index()] = Some(score);
        }
        let kind = kind.ok_or_else(|| perr(0, "lexicon has neither a header nor rows".into()))?;
        Ok(ScoredLexicon { kind, entries, min_df, smoothing })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StaticKind {
    Foreign,
    EnglishEquivalents,
    Slang,
    Typos,
}

impl StaticKind {
    /// Order used by the irregular-vocabulary feature block.
    pub const ALL: [StaticKind; 4] =
        [StaticKind::Foreign, StaticKind::EnglishEquivalents, StaticKind::Slang, StaticKind::Typos];

    pub fn as_str(self) -> &'static str {
        match self {
            StaticKind::Foreign => "foreign",
            StaticKind::EnglishEquivalents => "english_equivalents",
            StaticKind::Slang => "slang",
            StaticKind::Typos => "typos",
        }
    }
}

/// A case-folded word list. For typos only the wrong forms are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticLexicon {
    pub kind: StaticKind,
    pub words: BTreeSet<String>,
}

impl StaticLexicon {
    /// Parses one word per line, or `wrong<TAB>correct` for typos. Blank
    /// lines and `#` comments are skipped.
    pub fn parse(text: &str, kind: StaticKind) -> Result<Self> {
        let mut words = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: &str| Error::Parse { line: idx + 1, message: message.into() };
            let word = if kind == StaticKind::Typos {
                let (wrong, right) = line.split_once('\t').ok_or_else(|| perr("expected `wrong<TAB>correct`"))?;
                if wrong.trim().is_empty() || right.trim().is_empty() || right.contains('\t') {
                    return Err(perr("expected `wrong<TAB>correct`"));
                }
                wrong.trim()
            } else {
                line.trim()
            };
            if word.contains(char::is_whitespace) {
                return Err(perr("entries must not contain whitespace"));
            }
            words.insert(word.to_lowercase());
        }
        if words.is_empty() {
            return Err(Error::Parse { line: 0, message: format!("{} lexicon is empty", kind.as_str()) });
        }
        Ok(Self { kind, words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
