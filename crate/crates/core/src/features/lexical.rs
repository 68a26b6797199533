use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::AnalyzedArticle;
use crate::corpus::Dataset;
use crate::textproc::{tokenize, TokenSequence};
use crate::{Error, Result};

pub const CONTENT_VOCAB_CAP: usize = 800;
pub const TITLE_VOCAB_CAP: usize = 300;
/// Words must occur in more than this many training articles.
pub const DEFAULT_TFIDF_MIN_DF: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfConfig {
    pub content_cap: usize,
    pub title_cap: usize,
    /// Strict lower bound on document frequency.
    pub df_above: usize,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        Self { content_cap: CONTENT_VOCAB_CAP, title_cap: TITLE_VOCAB_CAP, df_above: DEFAULT_TFIDF_MIN_DF }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermStat {
    pub word: String,
    pub df: u64,
}

/// Separate title and content vocabularies with their document frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pub content_vocab: Vec<TermStat>,
    pub title_vocab: Vec<TermStat>,
    pub n_docs: u64,
    #[serde(skip)]
    content_index: BTreeMap<String, usize>,
    #[serde(skip)]
    title_index: BTreeMap<String, usize>,
}

fn top_by_df<'a>(fields: impl Iterator<Item = &'a TokenSequence>, df_above: usize, cap: usize) -> Vec<TermStat> {
    let mut df: BTreeMap<&str, u64> = BTreeMap::new();
    for toks in fields {
        let unique: BTreeSet<&str> = toks.words().map(|t| t.lower.as_str()).collect();
        for w in unique {
            *df.entry(w).or_default() += 1;
        }
    }
    let mut terms: Vec<(&str, u64)> = df.into_iter().filter(|&(_, n)| n > df_above as u64).collect();
    terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    terms.truncate(cap);
    terms.into_iter().map(|(w, df)| TermStat { word: w.into(), df }).collect()
}

impl TfidfModel {
    pub fn new(content_vocab: Vec<TermStat>, title_vocab: Vec<TermStat>, n_docs: u64) -> Result<Self> {
        if content_vocab.len() > CONTENT_VOCAB_CAP || title_vocab.len() > TITLE_VOCAB_CAP {
            return Err(Error::invalid("TF.IDF vocabulary exceeds its fixed block size"));
        }
        if content_vocab.iter().chain(&title_vocab).any(|t| t.df == 0 || t.df > n_docs) {
            return Err(Error::invalid("document frequencies must lie in 1..=n_docs"));
        }
        let mut m = Self { content_vocab, title_vocab, n_docs, content_index: BTreeMap::new(), title_index: BTreeMap::new() };
        m.reindex();
        Ok(m)
    }

    /// Rebuilds lookup tables; needed after deserialization.
    pub fn reindex(&mut self) {
        self.content_index = self.content_vocab.iter().enumerate().map(|(i, t)| (t.word.clone(), i)).collect();
        self.title_index = self.title_vocab.iter().enumerate().map(|(i, t)| (t.word.clone(), i)).collect();
    }

    fn idf(&self, df: u64) -> f64 {
        libm::log(self.n_docs as f64 / df as f64)
    }

    /// Raw term frequency times `ln(N / df)`, 800 content slots then 300
    /// title slots, zero-padded.
    pub fn features(&self, a: &AnalyzedArticle<'_>) -> Vec<f64> {
        let mut out = vec![0.0; CONTENT_VOCAB_CAP + TITLE_VOCAB_CAP];
        let blocks = [
            (&a.content_tokens, &self.content_vocab, &self.content_index, 0),
            (&a.title_tokens, &self.title_vocab, &self.title_index, CONTENT_VOCAB_CAP),
        ];
        for (toks, vocab, index, offset) in blocks {
            for t in toks.words() {
                if let Some(&i) = index.get(t.lower.as_str()) {
                    out[offset + i] += 1.0;
                }
            }
            for (i, term) in vocab.iter().enumerate() {
                out[offset + i] *= self.idf(term.df);
            }
        }
        out
    }
}

/// Keeps the highest document-frequency words (df > `df_above`) per field.
pub fn fit_tfidf(train: &Dataset, config: &TfidfConfig) -> Result<TfidfModel> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.content_cap > CONTENT_VOCAB_CAP || config.title_cap > TITLE_VOCAB_CAP {
        return Err(Error::invalid("TF.IDF caps exceed the fixed block sizes"));
    }
    let titles: Vec<TokenSequence> = train.articles().map(|a| tokenize(&a.title)).collect();
    let contents: Vec<TokenSequence> = train.articles().map(|a| tokenize(&a.content)).collect();
    TfidfModel::new(
        top_by_df(contents.iter(), config.df_above, config.content_cap),
        top_by_df(titles.iter(), config.df_above, config.title_cap),
        train.len() as u64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Article;
    use alloc::format;

    fn article(title: &str, content: &str) -> Article {
        Article { id: 0, url: String::new(), date: String::new(), title: title.into(), content: content.into() }
    }

    fn corpus(contents: &[String]) -> Dataset {
        Dataset::from_texts(contents.iter().map(|c| ("", c.as_str(), None)))
    }

    /// Independent recomputation from raw whitespace-split counts.
    fn brute_force(docs: &[&str], doc: &str, word: &str) -> f64 {
        let df = docs.iter().filter(|d| d.split_whitespace().any(|w| w == word)).count() as f64;
        let tf = doc.split_whitespace().filter(|w| *w == word).count() as f64;
        tf * (docs.len() as f64 / df).ln()
    }

    #[test]
    fn hand_computed_three_doc_corpus() {
        let docs = ["чудо чудо факт", "факт новина", "новина факт"];
        let d = Dataset::from_texts(docs.iter().map(|c| ("", *c, None)));
        let cfg = TfidfConfig { df_above: 0, ..TfidfConfig::default() };
        let m = fit_tfidf(&d, &cfg).unwrap();
        let words: Vec<&str> = m.content_vocab.iter().map(|t| t.word.as_str()).collect();
        assert_eq!(words, ["факт", "новина", "чудо"]);
        let f = m.features(&AnalyzedArticle::new(&article("", docs[0])));
        assert!((f[2] - 2.0 * 3f64.ln()).abs() < 1e-12);
        // df = N gives idf 0
        assert_eq!(f[0], 0.0);
        assert_eq!(f.len(), 1100);
    }

    #[test]
    fn brute_force_oracle_on_small_corpus() {
        let docs = [
            "а б в а", "б в г", "в г д д", "а д е", "е ж з а", "з и а", "б б б", "к л м", "а к", "м н о а",
        ];
        let d = Dataset::from_texts(docs.iter().map(|c| ("", *c, None)));
        let m = fit_tfidf(&d, &TfidfConfig { df_above: 0, ..TfidfConfig::default() }).unwrap();
        for doc in docs {
            let f = m.features(&AnalyzedArticle::new(&article("", doc)));
            for (i, term) in m.content_vocab.iter().enumerate() {
                assert!((f[i] - brute_force(&docs, doc, &term.word)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vocabulary_threshold_and_caps() {
        // 10 words present in 6 docs each, one word present in exactly 5
        let mut docs: Vec<String> = (0..6).map(|_| (0..10).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")).collect();
        for d in docs.iter_mut().take(5) {
            d.push_str(" петица");
        }
        let m = fit_tfidf(&corpus(&docs), &TfidfConfig::default()).unwrap();
        assert_eq!(m.content_vocab.len(), 10);
        assert!(m.content_vocab.iter().all(|t| t.word != "петица"));

        // 801 words with df > 5: the lowest ranked is dropped
        let big: Vec<String> = (0..7)
            .map(|_| (0..801).map(|i| format!("x{i:04}")).collect::<Vec<_>>().join(" "))
            .collect();
        let m = fit_tfidf(&corpus(&big), &TfidfConfig::default()).unwrap();
        assert_eq!(m.content_vocab.len(), 800);
        assert_eq!(m.content_vocab.last().unwrap().word, "x0799");
        assert!(fit_tfidf(&Dataset::default(), &TfidfConfig::default()).is_err());
    }

    #[test]
    fn title_block_and_absent_words() {
        let d = Dataset::from_texts((0..4).map(|i| (if i < 2 { "шок новина" } else { "новина" }, "текст", None)));
        let m = fit_tfidf(&d, &TfidfConfig { df_above: 0, ..TfidfConfig::default() }).unwrap();
        let f = m.features(&AnalyzedArticle::new(&article("Шок шок", "")));
        let shock = m.title_vocab.iter().position(|t| t.word == "шок").unwrap();
        assert!((f[CONTENT_VOCAB_CAP + shock] - 2.0 * 2f64.ln()).abs() < 1e-12);
        let f = m.features(&AnalyzedArticle::new(&article("нищо", "нищо")));
        assert!(f.iter().all(|&v| v == 0.0));
    }
}
