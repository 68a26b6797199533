use alloc::vec::Vec;

use super::AnalyzedArticle;
use crate::textproc::{LanguageProfile, PosTag, PosTagger, Token};

fn tag_ratios(tokens: &[Token], tagger: &dyn PosTagger) -> [f64; 10] {
    let mut out = [0.0; 10];
    if tokens.is_empty() {
        return out;
    }
    for tag in tagger.tag(tokens) {
        out[tag.index()] += 1.0;
    }
    let n = tokens.len() as f64;
    out.iter_mut().for_each(|v| *v /= n);
    out
}

/// Fraction of tokens that are stop words; 0 for an empty field.
pub fn stopword_ratio(tokens: &[Token], profile: &LanguageProfile) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    tokens.iter().filter(|t| profile.is_stopword(&t.lower)).count() as f64 / tokens.len() as f64
}

/// Ratios of the ten coarse POS tags, title block then content block.
///
/// The content stop-word ratio is computed and logged at debug level but
/// has no slot in the vector.
pub fn grammatical_features(a: &AnalyzedArticle<'_>, profile: &LanguageProfile, tagger: &dyn PosTagger) -> Vec<f64> {
    log::debug!("content stop-word ratio {:.4}", stopword_ratio(&a.content_tokens, profile));
    let mut out = Vec::with_capacity(2 * PosTag::ALL.len());
    out.extend(tag_ratios(&a.title_tokens, tagger));
    out.extend(tag_ratios(&a.content_tokens, tagger));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Article;
    use crate::textproc::HeuristicTagger;
    use alloc::string::String;
    use proptest::prelude::*;

    fn article(title: &str, content: &str) -> Article {
        Article { id: 0, url: String::new(), date: String::new(), title: title.into(), content: content.into() }
    }

    #[test]
    fn ratios_per_field() {
        let mut p = LanguageProfile::new("аеиоуъюя".chars());
        p.set_pos_lexicon("котка\tNOUN\nкуче\tNOUN\nтича\tVERB").unwrap();
        let tagger = HeuristicTagger::new(&p);
        let art = article("", "котка куче тича бързо");
        let f = grammatical_features(&AnalyzedArticle::new(&art), &p, &tagger);
        assert_eq!(f.len(), 20);
        assert!(f[..10].iter().all(|&v| v == 0.0));
        assert_eq!(f[10 + PosTag::Noun.index()], 0.5);
        assert_eq!(f[10 + PosTag::Verb.index()], 0.25);
        assert_eq!(f[10 + PosTag::Other.index()], 0.25);
    }

    #[test]
    fn stopword_ratio_counts_tokens() {
        let p = LanguageProfile::bulgarian();
        let art = article("", "котка и куче");
        assert!((stopword_ratio(&AnalyzedArticle::new(&art).content_tokens, &p) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(stopword_ratio(&[], &p), 0.0);
    }

    proptest! {
        #[test]
        fn ratios_sum_to_one(title in "[а-я ]{0,40}", content in "[а-яА-Я0-9 .,]{0,80}") {
            let p = LanguageProfile::bulgarian();
            let tagger = HeuristicTagger::new(&p);
            let art = article(&title, &content);
            let a = AnalyzedArticle::new(&art);
            let f = grammatical_features(&a, &p, &tagger);
            for (block, toks) in [(&f[..10], &a.title_tokens), (&f[10..], &a.content_tokens)] {
                let s: f64 = block.iter().sum();
                if toks.is_empty() {
                    prop_assert_eq!(s, 0.0);
                } else {
                    prop_assert!((s - 1.0).abs() <= 1e-12);
                }
            }
        }
    }
}
