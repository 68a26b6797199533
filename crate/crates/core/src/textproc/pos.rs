use core::fmt;
use core::str::FromStr;

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{LanguageProfile, Token, TokenKind};

/// The ten coarse part-of-speech classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Num,
    Adp,
    Conj,
    Part,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Num,
        PosTag::Adp,
        PosTag::Conj,
        PosTag::Part,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Num => "NUM",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Part => "PART",
            PosTag::Other => "OTHER",
        }
    }

    /// Position in [`PosTag::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownTag;

impl FromStr for PosTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or(UnknownTag)
    }
}

/// Anything that assigns one coarse tag per token.
pub trait PosTagger {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag>;
}

/// Dictionary lookup, then the numeric rule, then suffix rules, else `OTHER`.
#[derive(Debug, Clone, Copy)]
pub struct HeuristicTagger<'a> {
    profile: &'a LanguageProfile,
}

impl<'a> HeuristicTagger<'a> {
    pub fn new(profile: &'a LanguageProfile) -> Self {
        Self { profile }
    }

    fn tag_one(&self, token: &Token) -> PosTag {
        if let Some(tag) = self.profile.lookup_pos(&token.lower) {
            return tag;
        }
        match token.kind {
            TokenKind::Number => return PosTag::Num,
            TokenKind::Url => return PosTag::Other,
            TokenKind::Word => {}
        }
        let len = token.lower.chars().count();
        self.profile
            .suffix_rules()
            .iter()
            .find(|(suffix, _)| len > suffix.chars().count() && token.lower.ends_with(suffix.as_str()))
            .map_or(PosTag::Other, |(_, tag)| *tag)
    }
}

impl PosTagger for HeuristicTagger<'_> {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag_one(t)).collect()
    }
}
