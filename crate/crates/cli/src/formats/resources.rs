//! Lexicon and language-profile resource files.

use std::path::{Path, PathBuf};

use fakenews_core::features::{PmiLexicons, StaticLexicons};
use fakenews_core::resources::{ScoredLexicon, StaticKind, StaticLexicon, TermKind};
use fakenews_core::textproc::LanguageProfile;

use super::ArtifactMeta;
use crate::error::{CliError, Result};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn lexicon_path(dir: &Path, kind: TermKind) -> PathBuf {
    dir.join(format!("{}.tsv", kind.as_str()))
}

pub fn static_lexicon_path(dir: &Path, kind: StaticKind) -> PathBuf {
    let ext = if kind == StaticKind::Typos { "tsv" } else { "txt" };
    dir.join(format!("{}.{ext}", kind.as_str()))
}

/// Lexicon TSV preceded by a `#` provenance line.
pub fn lexicon_tsv(meta: &ArtifactMeta, lex: &ScoredLexicon) -> String {
    format!("# config_hash={} seed={}\n{}", meta.config_hash, meta.seed, lex.to_tsv())
}

pub fn load_scored_lexicon(path: &Path) -> Result<ScoredLexicon> {
    ScoredLexicon::from_tsv(&read(path)?).map_err(|e| CliError::data(path, e))
}

pub fn load_pmi_lexicons(dir: &Path) -> Result<PmiLexicons> {
    let mut loaded = Vec::with_capacity(3);
    for kind in TermKind::ALL {
        let path = lexicon_path(dir, kind);
        let lex = load_scored_lexicon(&path)?;
        if lex.kind != kind {
            return Err(CliError::format(&path, format!("holds a {} lexicon, expected {kind}", lex.kind)));
        }
        loaded.push(lex);
    }
    let named_entity = loaded.pop().expect("three lexicons");
    let bigram = loaded.pop().expect("three lexicons");
    let unigram = loaded.pop().expect("three lexicons");
    Ok(PmiLexicons::new(unigram, bigram, named_entity)?)
}

pub fn load_static_lexicon(path: &Path, kind: StaticKind) -> Result<StaticLexicon> {
    StaticLexicon::parse(&read(path)?, kind).map_err(|e| CliError::data(path, e))
}

pub fn load_static_lexicons(dir: &Path) -> Result<StaticLexicons> {
    let get = |k| load_static_lexicon(&static_lexicon_path(dir, k), k);
    Ok(StaticLexicons {
        foreign: get(StaticKind::Foreign)?,
        english_equivalents: get(StaticKind::EnglishEquivalents)?,
        slang: get(StaticKind::Slang)?,
        typos: get(StaticKind::Typos)?,
    })
}

/// The built-in Bulgarian profile with any of `vowels.txt`,
/// `stopwords.txt`, `abbreviations.txt`, `pos_lexicon.tsv` and
/// `suffix_rules.tsv` found in `dir` replacing the defaults.
pub fn load_profile(dir: Option<&Path>) -> Result<LanguageProfile> {
    let mut profile = LanguageProfile::bulgarian();
    let Some(dir) = dir else { return Ok(profile) };
    let optional = |name: &str| -> Result<Option<(PathBuf, String)>> {
        let p = dir.join(name);
        if p.exists() {
            Ok(Some((p.clone(), read(&p)?)))
        } else {
            Ok(None)
        }
    };
    if let Some((_, text)) = optional("vowels.txt")? {
        profile.set_vowels(text.chars().filter(|c| !c.is_whitespace()));
    }
    if let Some((_, text)) = optional("stopwords.txt")? {
        profile.set_stopwords(&text);
    }
    if let Some((_, text)) = optional("abbreviations.txt")? {
        profile.set_abbreviations(&text);
    }
    if let Some((p, text)) = optional("pos_lexicon.tsv")? {
        profile.set_pos_lexicon(&text).map_err(|e| CliError::data(&p, e))?;
    }
    if let Some((p, text)) = optional("suffix_rules.tsv")? {
        profile.set_suffix_rules(&text).map_err(|e| CliError::data(&p, e))?;
    }
    Ok(profile)
}
