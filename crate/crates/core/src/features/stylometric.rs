use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::AnalyzedArticle;
use crate::resources::{field_terms, PmiClass, ScoredLexicon, StaticKind, StaticLexicon, TermKind};
use crate::textproc::{count_lexicon_hits, count_syllables, split_sentences, LanguageProfile};
use crate::{Error, Result};

/// The three PMI lexicons, one per term kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmiLexicons {
    pub unigram: ScoredLexicon,
    pub bigram: ScoredLexicon,
    pub named_entity: ScoredLexicon,
}

impl PmiLexicons {
    pub fn new(unigram: ScoredLexicon, bigram: ScoredLexicon, named_entity: ScoredLexicon) -> Result<Self> {
        for (lex, kind) in [(&unigram, TermKind::Unigram), (&bigram, TermKind::Bigram), (&named_entity, TermKind::NamedEntity)] {
            if lex.kind != kind {
                return Err(Error::invalid(alloc::format!("expected a {kind} lexicon, got {}", lex.kind)));
            }
        }
        Ok(Self { unigram, bigram, named_entity })
    }

    pub fn get(&self, kind: TermKind) -> &ScoredLexicon {
        match kind {
            TermKind::Unigram => &self.unigram,
            TermKind::Bigram => &self.bigram,
            TermKind::NamedEntity => &self.named_entity,
        }
    }
}

/// The four static word lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticLexicons {
    pub foreign: StaticLexicon,
    pub english_equivalents: StaticLexicon,
    pub slang: StaticLexicon,
    pub typos: StaticLexicon,
}

impl StaticLexicons {
    pub fn get(&self, kind: StaticKind) -> &StaticLexicon {
        match kind {
            StaticKind::Foreign => &self.foreign,
            StaticKind::EnglishEquivalents => &self.english_equivalents,
            StaticKind::Slang => &self.slang,
            StaticKind::Typos => &self.typos,
        }
    }
}

/// 48 values: for each term kind, field (title, body) and class, the sum
/// and the mean of the scores of matched term occurrences. No matches
/// gives a mean of 0.
pub fn pmi_features(a: &AnalyzedArticle<'_>, lexicons: &PmiLexicons, profile: &LanguageProfile) -> Vec<f64> {
    let mut out = Vec::with_capacity(48);
    for kind in TermKind::ALL {
        let lex = lexicons.get(kind);
        for (text, tokens) in [(a.title, &a.title_tokens), (a.content, &a.content_tokens)] {
            let terms = field_terms(text, tokens, kind, profile);
            for class in PmiClass::ALL {
                let (sum, n) = terms
                    .iter()
                    .filter_map(|t| lex.score(t, class))
                    .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
                out.push(sum);
                out.push(if n > 0 { sum / n as f64 } else { 0.0 });
            }
        }
    }
    out
}

/// Type-token ratio, mean word length, Flesch-Kincaid grade and Gunning fog
/// index of the content. All zero for content without words.
pub fn readability_features(a: &AnalyzedArticle<'_>, profile: &LanguageProfile) -> [f64; 4] {
    let words: Vec<&str> = a.content_tokens.words().map(|t| t.lower.as_str()).collect();
    if words.is_empty() {
        return [0.0; 4];
    }
    let n_words = words.len() as f64;
    let n_sentences = split_sentences(a.content, profile).len().max(1) as f64;
    let types: BTreeSet<&str> = words.iter().copied().collect();
    let chars: usize = words.iter().map(|w| w.chars().count()).sum();
    let mut syllables = 0usize;
    let mut complex = 0usize;
    for w in &words {
        let s = count_syllables(w, profile);
        syllables += s;
        complex += usize::from(s >= 3);
    }
    let words_per_sentence = n_words / n_sentences;
    [
        types.len() as f64 / n_words,
        chars as f64 / n_words,
        0.39 * words_per_sentence + 11.8 * (syllables as f64 / n_words) - 15.59,
        0.4 * (words_per_sentence + 100.0 * complex as f64 / n_words),
    ]
}

const SYMBOLS: &[char] = &['$', '.', '!', ';', '#', '?', ':', '-', '+', '@', '%', '^', '&', '*', '(', ')', ','];

/// Word, character, symbol and capital counts for title and content, the
/// capital-letter fractions, URLs in the content and the fraction of title
/// words that also occur in the content.
pub fn orthographic_features(a: &AnalyzedArticle<'_>) -> [f64; 12] {
    let symbols = |s: &str| s.chars().filter(|c| SYMBOLS.contains(c)).count() as f64;
    let capitals = |s: &str| s.chars().filter(|c| c.is_uppercase()).count() as f64;
    let cap_fraction = |s: &str| {
        let letters = s.chars().filter(|c| c.is_alphabetic()).count();
        if letters == 0 { 0.0 } else { capitals(s) / letters as f64 }
    };
    let title_words: BTreeSet<&str> = a.title_tokens.words().map(|t| t.lower.as_str()).collect();
    let content_words: BTreeSet<&str> = a.content_tokens.words().map(|t| t.lower.as_str()).collect();
    let overlap = if title_words.is_empty() {
        0.0
    } else {
        title_words.intersection(&content_words).count() as f64 / title_words.len() as f64
    };
    [
        a.title_tokens.words().count() as f64,
        a.content_tokens.words().count() as f64,
        a.title.chars().count() as f64,
        a.content.chars().count() as f64,
        symbols(a.title),
        symbols(a.content),
        capitals(a.title),
        capitals(a.content),
        cap_fraction(a.title),
        cap_fraction(a.content),
        a.content_tokens.iter().filter(|t| t.is_url()).count() as f64,
        overlap,
    ]
}

/// Occurrence counts over title and content for foreign words, English
/// words with local equivalents, slang and typos.
pub fn irregular_vocab_features(a: &AnalyzedArticle<'_>, lexicons: &StaticLexicons) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (slot, kind) in out.iter_mut().zip(StaticKind::ALL) {
        let words = &lexicons.get(kind).words;
        *slot = (count_lexicon_hits(&a.title_tokens, words) + count_lexicon_hits(&a.content_tokens, words)) as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Article, Dataset, Labels};
    use crate::resources::{build_pmi_lexicon, ClassScores};
    use alloc::collections::BTreeMap;
    use alloc::string::String;

    fn article(title: &str, content: &str) -> Article {
        Article { id: 0, url: String::new(), date: String::new(), title: title.into(), content: content.into() }
    }

    fn lexicon(kind: TermKind, rows: &[(&str, f64)]) -> ScoredLexicon {
        let entries: BTreeMap<String, ClassScores> = rows
            .iter()
            .map(|(t, v)| ((*t).into(), ClassScores([Some(*v), Some(-*v), None, None])))
            .collect();
        ScoredLexicon { kind, entries, min_df: 1, smoothing: 0.0 }
    }

    fn lexicons(unigrams: &[(&str, f64)]) -> PmiLexicons {
        PmiLexicons::new(
            lexicon(TermKind::Unigram, unigrams),
            lexicon(TermKind::Bigram, &[]),
            lexicon(TermKind::NamedEntity, &[]),
        )
        .unwrap()
    }

    #[test]
    fn pmi_single_and_double_match() {
        let p = LanguageProfile::bulgarian();
        let lex = lexicons(&[("скрит", 0.9), ("тайнствена", 0.8), ("чудо", 0.6)]);
        let art = article("Скрит обект", "");
        let f = pmi_features(&AnalyzedArticle::new(&art), &lex, &p);
        assert_eq!(f.len(), 48);
        // unigram/title/fake sum and avg
        assert_eq!((f[0], f[1]), (0.9, 0.9));
        // unigram/title/non_fake
        assert_eq!((f[2], f[3]), (-0.9, -0.9));
        // clickbait classes have no scores
        assert_eq!((f[4], f[5]), (0.0, 0.0));

        let art = article("Тайнствена чудо", "");
        let f = pmi_features(&AnalyzedArticle::new(&art), &lex, &p);
        assert!((f[0] - 1.4).abs() < 1e-12 && (f[1] - 0.7).abs() < 1e-12);

        let art = article("нищо", "съвсем нищо");
        assert!(pmi_features(&AnalyzedArticle::new(&art), &lex, &p).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pmi_counts_body_occurrences() {
        let p = LanguageProfile::bulgarian();
        let lex = lexicons(&[("чудо", 0.5)]);
        let art = article("", "чудо и пак чудо");
        let f = pmi_features(&AnalyzedArticle::new(&art), &lex, &p);
        // unigram/body block starts after 8 title values
        assert_eq!((f[8], f[9]), (1.0, 0.5));
    }

    #[test]
    fn pmi_uses_all_three_kinds() {
        let p = LanguageProfile::bulgarian();
        let fake = Some(Labels { is_fake: true, is_clickbait: true });
        let real = Some(Labels { is_fake: false, is_clickbait: false });
        let d = Dataset::from_texts([
            ("Следете в сайта", "Вчера Иван Петров каза", fake),
            ("Новини", "Кметът говори", real),
        ]);
        let build = |k| build_pmi_lexicon(&d, k, 1, 0.5, &p).unwrap();
        let lex = PmiLexicons::new(build(TermKind::Unigram), build(TermKind::Bigram), build(TermKind::NamedEntity)).unwrap();
        let art = article("Следете в сайта", "Вчера Иван Петров каза");
        let f = pmi_features(&AnalyzedArticle::new(&art), &lex, &p);
        assert!(f[16] > 0.0, "bigram title fake sum");
        assert!(f[32 + 8] > 0.0, "entity body fake sum");
        assert!(PmiLexicons::new(build(TermKind::Bigram), build(TermKind::Bigram), build(TermKind::NamedEntity)).is_err());
    }

    #[test]
    fn readability_formulas() {
        let p = LanguageProfile::bulgarian();
        // six one-syllable words, two sentences
        let art = article("", "Кот спи там. Пес лай днес.");
        let [ttr, avg_len, fk, fog] = readability_features(&AnalyzedArticle::new(&art), &p);
        assert_eq!(ttr, 1.0);
        assert!((avg_len - 19.0 / 6.0).abs() < 1e-12);
        assert!((fk - -2.62).abs() < 1e-9, "{fk}");
        assert!((fog - 1.2).abs() < 1e-9, "{fog}");

        let art = article("", "a b a");
        assert!((readability_features(&AnalyzedArticle::new(&art), &p)[0] - 2.0 / 3.0).abs() < 1e-15);
        let art = article("", "");
        assert_eq!(readability_features(&AnalyzedArticle::new(&art), &p), [0.0; 4]);
    }

    #[test]
    fn orthographic_counts() {
        let art = article("ШОК!", "");
        let f = orthographic_features(&AnalyzedArticle::new(&art));
        assert_eq!(f[6], 3.0);
        assert_eq!(f[4], 1.0);
        assert_eq!(f[8], 1.0);
        assert_eq!(f[2], 4.0);

        let art = article("Котка яде", "Една котка яде риба, виж http://a.bg и www.b.com.");
        let f = orthographic_features(&AnalyzedArticle::new(&art));
        assert_eq!(f[11], 1.0);
        assert_eq!(f[10], 2.0);
        assert_eq!(f[0], 2.0);

        let art = article("Котка лае", "котка мяука");
        assert_eq!(orthographic_features(&AnalyzedArticle::new(&art))[11], 0.5);

        let art = article("", "");
        assert_eq!(orthographic_features(&AnalyzedArticle::new(&art)), [0.0; 12]);
    }

    #[test]
    fn irregular_counts() {
        let lex = |kind, text| StaticLexicon::parse(text, kind).unwrap();
        let lexicons = StaticLexicons {
            foreign: lex(StaticKind::Foreign, "okay\n"),
            english_equivalents: lex(StaticKind::EnglishEquivalents, "event\n"),
            slang: lex(StaticKind::Slang, "яко\nкеф\n"),
            typos: lex(StaticKind::Typos, "сеа\tсега\n"),
        };
        let art = article("Яко", "кеф, сеа и сеа и пак сеа");
        assert_eq!(irregular_vocab_features(&AnalyzedArticle::new(&art), &lexicons), [0.0, 0.0, 2.0, 3.0]);
        let art = article("нищо", "");
        assert_eq!(irregular_vocab_features(&AnalyzedArticle::new(&art), &lexicons), [0.0; 4]);
    }
}
