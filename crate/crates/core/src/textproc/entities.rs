use alloc::string::String;
use alloc::vec::Vec;

use super::{split_sentences, tokenize, LanguageProfile};

/// Capitalization heuristic for named entities.
///
/// Returns maximal runs of adjacent capitalized word tokens inside one
/// sentence, joined by single spaces. The first word of a sentence is never
/// part of an entity since its capital letter carries no information.
pub fn extract_named_entities(text: &str, profile: &LanguageProfile) -> Vec<String> {
    let tokens = tokenize(text);
    let sentences = split_sentences(text, profile);
    let mut sentence_starts = sentences.iter().map(|s| s.start).peekable();
    let mut entities = Vec::new();
    let mut run: Vec<&str> = Vec::new();
    let mut prev_end: Option<usize> = None;

    let mut flush = |run: &mut Vec<&str>| {
        if !run.is_empty() {
            entities.push(run.join(" "));
            run.clear();
        }
    };

    for tok in tokens.iter() {
        let mut sentence_initial = false;
        while let Some(&s) = sentence_starts.peek() {
            if s <= tok.span.start {
                sentence_initial = true;
                sentence_starts.next();
            } else {
                break;
            }
        }
        let adjacent = prev_end.is_some_and(|end| text[end..tok.span.start].trim().is_empty());
        if sentence_initial || !adjacent || !tok.is_capitalized() {
            flush(&mut run);
        }
        if tok.is_capitalized() && !sentence_initial {
            run.push(&tok.surface);
        }
        prev_end = Some(tok.span.end);
    }
    flush(&mut run);
    entities
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ents(text: &str) -> Vec<String> {
        extract_named_entities(text, &LanguageProfile::bulgarian())
    }

    #[test]
    fn capitalized_runs() {
        assert_eq!(ents("Вчера Иван Петров каза"), vec!["Иван Петров"]);
        assert!(ents("Това е факт").is_empty());
        assert_eq!(ents("Иван видя Мария"), vec!["Мария"]);
    }

    #[test]
    fn runs_break_at_punctuation_and_sentences() {
        assert_eq!(ents("Срещнаха се Иван, Мария и Георги Иванов."), vec!["Иван", "Мария", "Георги Иванов"]);
        assert_eq!(ents("Дойде Иван. Мария не дойде."), vec!["Иван"]);
        assert!(ents("").is_empty());
    }
}
