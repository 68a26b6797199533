//! Language-aware text primitives.
//!
//! Everything here is a heuristic tuned for Bulgarian news text but driven
//! by a [`LanguageProfile`], so a different language only needs different
//! resource files.

mod entities;
mod pos;
mod profile;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Deref, Range};

pub use entities::extract_named_entities;
pub use pos::{HeuristicTagger, PosTag, PosTagger};
pub use profile::LanguageProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Number,
    Url,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    /// Byte offsets into the tokenized text.
    pub span: Range<usize>,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_url(&self) -> bool {
        self.kind == TokenKind::Url
    }

    /// True when the first character is an uppercase letter.
    pub fn is_capitalized(&self) -> bool {
        self.kind == TokenKind::Word && self.surface.chars().next().is_some_and(char::is_uppercase)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSequence(Vec<Token>);

impl TokenSequence {
    pub fn into_inner(self) -> Vec<Token> {
        self.0
    }

    /// Lowercased forms of every token, in order.
    pub fn lowers(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|t| t.lower.as_str())
    }

    /// Tokens that are not URLs.
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.0.iter().filter(|t| !t.is_url())
    }
}

impl Deref for TokenSequence {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.0
    }
}

const URL_PREFIXES: [&str; 3] = ["http://", "https://", "www."];
const URL_TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '"', '\'', '»', '…'];

fn starts_url(rest: &str) -> bool {
    URL_PREFIXES.iter().any(|p| {
        rest.len() >= p.len() && rest.is_char_boundary(p.len()) && rest[..p.len()].eq_ignore_ascii_case(p)
    })
}

/// Splits text into word, number and URL tokens. Punctuation is dropped,
/// but every token keeps its byte span so it can be recovered.
///
/// Hyphens and apostrophes join letters (`д-р`, `рок-н-рол`); `.` and `,`
/// join digits (`3.14`, `1,000`). URLs run to the next whitespace minus
/// trailing punctuation.
pub fn tokenize(text: &str) -> TokenSequence {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |idx: usize| chars.get(idx).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if !c.is_alphanumeric() {
            i += 1;
            continue;
        }
        let at_boundary = i == 0 || !chars[i - 1].1.is_alphanumeric();
        if at_boundary && starts_url(&text[start..]) {
            let mut j = i;
            while j < chars.len() && !chars[j].1.is_whitespace() {
                j += 1;
            }
            let raw = &text[start..end_of(j)];
            let url = raw.trim_end_matches(URL_TRAILING);
            tokens.push(Token {
                surface: url.into(),
                lower: url.to_lowercase(),
                span: start..start + url.len(),
                kind: TokenKind::Url,
            });
            i = j;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() {
            let cj = chars[j].1;
            if cj.is_alphanumeric() {
                j += 1;
                continue;
            }
            let next_alnum = chars.get(j + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
            let joins = match cj {
                '-' | '\'' | '’' => next_alnum,
                '.' | ',' => {
                    chars[j - 1].1.is_ascii_digit() && chars.get(j + 1).is_some_and(|&(_, n)| n.is_ascii_digit())
                }
                _ => false,
            };
            if !joins {
                break;
            }
            j += 2;
        }
        let surface = &text[start..end_of(j)];
        let kind = if surface.starts_with(|ch: char| ch.is_ascii_digit())
            && surface.chars().all(|ch| ch.is_ascii_digit() || ch == '.' || ch == ',')
        {
            TokenKind::Number
        } else {
            TokenKind::Word
        };
        tokens.push(Token { surface: surface.into(), lower: surface.to_lowercase(), span: start..end_of(j), kind });
        i = j;
    }
    TokenSequence(tokens)
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '»' | '“' | '”' | ')' | ']')
}

/// Sentence spans (byte ranges). A run of `. ! ? …` ends a sentence when it
/// is followed by whitespace or the end of the text, unless a single `.`
/// closes one of the profile's abbreviations.
pub fn split_sentences(text: &str, profile: &LanguageProfile) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |idx: usize| chars.get(idx).map_or(text.len(), |&(b, _)| b);
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_non_ws = 0;
    let mut i = 0;
    while i < chars.len() {
        let (b, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if start.is_none() {
            start = Some(b);
        }
        if !is_terminator(c) {
            last_non_ws = end_of(i + 1);
            i += 1;
            continue;
        }
        let run_start = i;
        let mut j = i;
        while j < chars.len() && (is_terminator(chars[j].1) || (j > run_start && is_closer(chars[j].1))) {
            j += 1;
        }
        last_non_ws = end_of(j);
        let followed_by_space = j == chars.len() || chars[j].1.is_whitespace();
        let single_dot = j == run_start + 1 && c == '.';
        let abbreviation = single_dot && {
            let mut k = run_start;
            while k > 0 && !chars[k - 1].1.is_whitespace() {
                k -= 1;
            }
            let word = &text[chars[k].0..end_of(run_start + 1)];
            profile.is_abbreviation(&word.to_lowercase())
        };
        if followed_by_space && !abbreviation {
            if let Some(s) = start.take() {
                spans.push(s..end_of(j));
            }
        }
        i = j;
    }
    if let Some(s) = start {
        spans.push(s..last_non_ws);
    }
    spans
}

/// Number of maximal vowel groups in `word`.
pub fn count_syllables(word: &str, profile: &LanguageProfile) -> usize {
    let mut groups = 0;
    let mut in_group = false;
    for c in word.chars() {
        let vowel = c.to_lowercase().any(|l| profile.is_vowel(l));
        if vowel && !in_group {
            groups += 1;
        }
        in_group = vowel;
    }
    groups
}

/// Occurrences (not types) of tokens whose lowercase form is in `lexicon`.
pub fn count_lexicon_hits(tokens: &TokenSequence, lexicon: &BTreeSet<String>) -> usize {
    if lexicon.is_empty() {
        return 0;
    }
    tokens.lowers().filter(|w| lexicon.contains(*w)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;

    fn lowers(text: &str) -> Vec<String> {
        tokenize(text).lowers().map(String::from).collect()
    }

    #[test]
    fn tokenizes_cyrillic_and_drops_punctuation() {
        assert_eq!(lowers("Шок! Това е."), vec!["шок", "това", "е"]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn keeps_urls_whole() {
        let toks = tokenize("виж http://a.bg сега");
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].surface, "http://a.bg");
        assert!(toks[1].is_url());
        let toks = tokenize("(линк: www.Example.com/x?a=1).");
        assert_eq!(toks[1].surface, "www.Example.com/x?a=1");
    }

    #[test]
    fn spans_recover_surface() {
        let text = "Д-р Иванов каза: 3,5 милиона и 1.25%!";
        for t in tokenize(text).iter() {
            assert_eq!(&text[t.span.clone()], t.surface);
        }
        let surfaces: Vec<_> = tokenize(text).iter().map(|t| t.surface.clone()).collect();
        assert_eq!(surfaces, vec!["Д-р", "Иванов", "каза", "3,5", "милиона", "и", "1.25"]);
        assert_eq!(tokenize("3,5").first().unwrap().kind, TokenKind::Number);
    }

    #[test]
    fn sentence_splitting() {
        let p = LanguageProfile::bulgarian();
        assert_eq!(split_sentences("А. Б! В?", &p).len(), 3);
        assert_eq!(split_sentences("няма край тук", &p).len(), 1);
        assert!(split_sentences("", &p).is_empty());
        assert!(split_sentences("   \n ", &p).is_empty());
        assert_eq!(split_sentences("Цената е 3.50 лв. днес. Наистина?!", &p).len(), 2);
        assert_eq!(split_sentences("Сайтът a.bg е нов. Край", &p).len(), 2);
        let text = "  Първо.  Второ  ";
        let spans = split_sentences(text, &p);
        assert_eq!(&text[spans[0].clone()], "Първо.");
        assert_eq!(&text[spans[1].clone()], "Второ");
    }

    #[test]
    fn syllables_are_vowel_groups() {
        let p = LanguageProfile::bulgarian();
        assert_eq!(count_syllables("ново", &p), 2);
        assert_eq!(count_syllables("срв", &p), 0);
        assert_eq!(count_syllables("феноменните", &p), 5);
        assert_eq!(count_syllables("НОВО", &p), 2);
        assert_eq!(count_syllables("beautiful", &p), 3);
    }

    #[test]
    fn lexicon_hits_count_occurrences() {
        let lex: BTreeSet<String> = ["яко".into()].into_iter().collect();
        assert_eq!(count_lexicon_hits(&tokenize("яко и пак Яко"), &lex), 2);
        assert_eq!(count_lexicon_hits(&tokenize("яко"), &BTreeSet::new()), 0);
    }

    proptest! {
        #[test]
        fn concatenation_adds_token_counts(a in "[а-яА-Яa-z0-9 .,!?-]{0,40}", b in "[а-яА-Яa-z0-9 .,!?-]{0,40}") {
            let joined = format!("{a} {b}");
            prop_assert_eq!(tokenize(&joined).len(), tokenize(&a).len() + tokenize(&b).len());
        }

        #[test]
        fn spans_increase_and_do_not_overlap(text in "\\PC{0,60}") {
            let toks = tokenize(&text);
            for w in toks.windows(2) {
                prop_assert!(w[0].span.end <= w[1].span.start);
            }
            for t in toks.iter() {
                prop_assert_eq!(&text[t.span.clone()], t.surface.as_str());
                prop_assert_eq!(t.lower.clone(), t.surface.to_lowercase());
            }
        }

        #[test]
        fn syllables_bounded_by_vowels(word in "\\PC{0,30}") {
            let p = LanguageProfile::bulgarian();
            let vowels = word.chars().filter(|c| c.to_lowercase().any(|l| p.is_vowel(l))).count();
            prop_assert!(count_syllables(&word, &p) <= vowels);
        }
    }
}
