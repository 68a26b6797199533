//! Seeded generator of labelled toy corpora and matching word vectors.
//!
//! Fake articles differ from real ones in three independent ways:
//!
//! * a small set of sensational marker words shows up in them far more
//!   often (but not exclusively);
//! * their titles share almost no words with the content, while real
//!   titles mostly repeat content words;
//! * their content draws topic words from a "fake" cluster of the vector
//!   space, real content from a "real" cluster. The clusters are large, so
//!   each topic word is rare and mostly below TF.IDF's document-frequency
//!   threshold.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{Dataset, Labels};
use crate::embeddings::{EmbeddingMatrix, Vocabulary};
use crate::features::WordVectors;
use crate::linalg::Matrix;
use crate::Result;

const SYLLABLES: [&str; 24] = [
    "ба", "ве", "ги", "до", "жу", "зе", "ка", "ло", "ми", "ну", "пе", "ри", "со", "ту", "фи", "хо", "це", "чу", "ша", "ще",
    "ър", "ян", "ол", "ек",
];

const FUNCTION_WORDS: [&str; 16] = ["и", "в", "на", "за", "с", "от", "че", "се", "по", "да", "е", "като", "но", "към", "при", "още"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub articles: usize,
    pub fake_fraction: f64,
    pub dim: usize,
    pub neutral_words: usize,
    pub cluster_words: usize,
    pub marker_words: usize,
    pub title_len: usize,
    pub content_len: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            articles: 1000,
            fake_fraction: 0.5,
            dim: 300,
            neutral_words: 300,
            cluster_words: 2000,
            marker_words: 20,
            title_len: 7,
            content_len: 36,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub dataset: Dataset,
    pub vectors: WordVectors,
    pub marker_words: Vec<String>,
}

fn pseudo_word(mut index: usize) -> String {
    let mut w = String::new();
    for _ in 0..3 {
        w.push_str(SYLLABLES[index % SYLLABLES.len()]);
        index /= SYLLABLES.len();
    }
    w
}

fn capitalize(w: &str) -> String {
    let mut chars = w.chars();
    chars.next().map(|c| c.to_uppercase().chain(chars).collect()).unwrap_or_default()
}

struct Pools {
    neutral: Vec<String>,
    fake: Vec<String>,
    real: Vec<String>,
    markers: Vec<String>,
}

impl Pools {
    fn new(config: &SyntheticConfig, rng: &mut impl Rng) -> Self {
        let total = config.neutral_words + 2 * config.cluster_words + config.marker_words;
        let mut ids: Vec<usize> = (0..SYLLABLES.len().pow(3)).collect();
        ids.shuffle(rng);
        let mut words = ids.into_iter().map(pseudo_word).filter(|w| !FUNCTION_WORDS.contains(&w.as_str()));
        let mut take = |n: usize| (&mut words).take(n).collect::<Vec<_>>();
        let pools = Pools {
            neutral: take(config.neutral_words),
            fake: take(config.cluster_words),
            real: take(config.cluster_words),
            markers: take(config.marker_words),
        };
        assert_eq!(pools.neutral.len() + pools.fake.len() + pools.real.len() + pools.markers.len(), total);
        pools
    }
}

fn pick<'a>(pool: &'a [String], rng: &mut impl Rng) -> &'a str {
    &pool[rng.gen_range(0..pool.len())]
}

fn article(fake: bool, config: &SyntheticConfig, pools: &Pools, rng: &mut impl Rng) -> (String, String) {
    let cluster = if fake { &pools.fake } else { &pools.real };
    let marker_rate = if fake { 0.12 } else { 0.02 };
    let mut content: Vec<String> = Vec::with_capacity(config.content_len);
    for _ in 0..config.content_len {
        let r: f64 = rng.gen();
        let w = if r < marker_rate {
            pick(&pools.markers, rng)
        } else if r < 0.3 {
            FUNCTION_WORDS[rng.gen_range(0..FUNCTION_WORDS.len())]
        } else if r < 0.55 {
            pick(cluster, rng)
        } else {
            pick(&pools.neutral, rng)
        };
        content.push(w.into());
    }

    let used: BTreeSet<&str> = content.iter().map(String::as_str).collect();
    let mut title: Vec<String> = Vec::with_capacity(config.title_len);
    if fake {
        if rng.gen_bool(0.6) {
            title.push(pick(&pools.markers, rng).into());
        }
        while title.len() < config.title_len {
            let w = pick(&pools.neutral, rng);
            if !used.contains(w) {
                title.push(w.into());
            }
        }
    } else {
        if rng.gen_bool(0.1) {
            title.push(pick(&pools.markers, rng).into());
        }
        let candidates: Vec<&String> =
            content.iter().filter(|w| !FUNCTION_WORDS.contains(&w.as_str())).collect();
        while title.len() < config.title_len {
            title.push(candidates[rng.gen_range(0..candidates.len())].clone());
        }
    }
    title.shuffle(rng);
    if let Some(first) = title.first_mut() {
        *first = capitalize(first);
    }
    let mut title = title.join(" ");
    if rng.gen_bool(if fake { 0.5 } else { 0.1 }) {
        title.push('!');
    }

    let mut text = String::new();
    for (i, chunk) in content.chunks(9).enumerate() {
        if i > 0 {
            text.push(' ');
        }
        let sentence = chunk.join(" ");
        text.push_str(&capitalize(&sentence));
        text.push('.');
    }
    (title, text)
}

/// Generates the corpus and 300-d (by default) vectors covering every word.
pub fn generate(config: &SyntheticConfig) -> Result<SyntheticCorpus> {
    let mut rng = crate::seeded_rng(config.seed);
    let pools = Pools::new(config, &mut rng);
    let fake_count = libm::round(config.articles as f64 * config.fake_fraction) as usize;
    let mut flags: Vec<bool> = (0..config.articles).map(|i| i < fake_count).collect();
    flags.shuffle(&mut rng);
    let rows: Vec<(String, String, Option<Labels>)> = flags
        .iter()
        .map(|&fake| {
            let (t, c) = article(fake, config, &pools, &mut rng);
            (t, c, Some(Labels { is_fake: fake, is_clickbait: fake }))
        })
        .collect();
    let dataset = Dataset::from_texts(rows);

    let d = config.dim;
    let mut unit = |scale: f64| (0..d).map(|_| rng.gen_range(-scale..scale)).collect::<Vec<f64>>();
    let fake_centroid = unit(1.0);
    let real_centroid = unit(1.0);
    let mut words: Vec<String> = Vec::new();
    let mut data: Vec<f64> = Vec::new();
    let mut rng = crate::seeded_rng(config.seed ^ 0x5eed);
    let mut push = |w: &str, centroid: Option<&[f64]>, words: &mut Vec<String>, data: &mut Vec<f64>| {
        words.push(w.into());
        for k in 0..d {
            let noise = rng.gen_range(-0.6..0.6);
            data.push(centroid.map_or(0.0, |c| c[k]) + noise);
        }
    };
    for w in FUNCTION_WORDS {
        push(w, None, &mut words, &mut data);
    }
    for w in pools.neutral.iter().chain(&pools.markers) {
        push(w, None, &mut words, &mut data);
    }
    for w in &pools.fake {
        push(w, Some(&fake_centroid), &mut words, &mut data);
    }
    for w in &pools.real {
        push(w, Some(&real_centroid), &mut words, &mut data);
    }
    let n = words.len();
    let vocab = Vocabulary::from_words(words)?;
    let matrix = Matrix::from_vec(n, d, data).expect("n·d values");
    let vectors = WordVectors::new(vocab, EmbeddingMatrix::from_input(matrix)?)?;
    Ok(SyntheticCorpus { dataset, vectors, marker_words: pools.markers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::class_prior;
    use crate::corpus::LabelKind;
    use crate::features::{fit_tfidf, orthographic_features, AnalyzedArticle, TfidfConfig};

    fn small() -> SyntheticConfig {
        SyntheticConfig { articles: 200, dim: 16, cluster_words: 400, ..SyntheticConfig::default() }
    }

    #[test]
    fn deterministic_and_sized() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        assert_eq!(a.dataset, b.dataset);
        assert_eq!(a.vectors, b.vectors);
        assert_eq!(a.dataset.len(), 200);
        assert_eq!(class_prior(&a.dataset, LabelKind::Fake).unwrap(), 0.5);
        assert_eq!(a.vectors.dim(), 16);
        let c = generate(&SyntheticConfig { seed: 1, ..small() }).unwrap();
        assert_ne!(a.dataset, c.dataset);
    }

    #[test]
    fn every_token_has_a_vector() {
        let s = generate(&small()).unwrap();
        for art in s.dataset.articles() {
            let a = AnalyzedArticle::new(art);
            for t in a.title_tokens.iter().chain(a.content_tokens.iter()) {
                assert!(s.vectors.vocab.get(&t.lower).is_some(), "{}", t.lower);
            }
        }
    }

    #[test]
    fn overlap_separates_classes() {
        let s = generate(&small()).unwrap();
        for item in s.dataset.items() {
            let overlap = orthographic_features(&AnalyzedArticle::new(&item.article))[11];
            if item.labels.unwrap().is_fake {
                assert!(overlap < 0.2, "{overlap}");
            } else {
                assert!(overlap > 0.5, "{overlap}");
            }
        }
    }

    #[test]
    fn tfidf_sees_few_cluster_words() {
        let config = SyntheticConfig { dim: 8, ..SyntheticConfig::default() };
        let s = generate(&config).unwrap();
        let tfidf = fit_tfidf(&s.dataset, &TfidfConfig::default()).unwrap();
        let first_cluster = FUNCTION_WORDS.len() + config.neutral_words + config.marker_words;
        let kept: BTreeSet<&str> = tfidf.content_vocab.iter().chain(&tfidf.title_vocab).map(|t| t.word.as_str()).collect();
        let clustered = kept.iter().filter(|w| s.vectors.vocab.get(w).is_some_and(|i| i >= first_cluster)).count();
        assert!(clustered * 10 < 2 * config.cluster_words, "{clustered} cluster words kept");
        assert!(s.marker_words.iter().all(|m| kept.contains(m.as_str())));
    }
}
