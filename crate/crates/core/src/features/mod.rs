//! Hand-crafted feature groups, vector assembly and max-abs scaling.

mod grammatical;
mod lexical;
mod scaler;
mod schema;
mod semantic;
mod stylometric;

use alloc::format;
use alloc::vec::Vec;

use crate::corpus::Article;
use crate::textproc::{tokenize, HeuristicTagger, LanguageProfile, TokenSequence};
use crate::{Error, Result};

pub use grammatical::{grammatical_features, stopword_ratio};
pub use lexical::{fit_tfidf, TermStat, TfidfConfig, TfidfModel, CONTENT_VOCAB_CAP, DEFAULT_TFIDF_MIN_DF, TITLE_VOCAB_CAP};
pub use scaler::{fit_scaler, Scaler};
pub use schema::{FeatureGroup, FeatureSchema, GroupSet, EMBEDDING_DIM, TASK_EMBEDDING_DIM};
pub use semantic::{embedding_features, WordVectors};
pub use stylometric::{
    irregular_vocab_features, orthographic_features, pmi_features, readability_features, PmiLexicons, StaticLexicons,
};

/// An article with both fields tokenized once.
#[derive(Debug, Clone)]
pub struct AnalyzedArticle<'a> {
    pub title: &'a str,
    pub content: &'a str,
    pub title_tokens: TokenSequence,
    pub content_tokens: TokenSequence,
}

impl<'a> AnalyzedArticle<'a> {
    pub fn new(article: &'a Article) -> Self {
        Self {
            title: &article.title,
            content: &article.content,
            title_tokens: tokenize(&article.title),
            content_tokens: tokenize(&article.content),
        }
    }
}

/// Dense feature values aligned to a [`FeatureSchema`].
pub type FeatureVector = Vec<f64>;

/// Everything needed to compute the hand-crafted groups. Only the models
/// of enabled groups have to be present.
#[derive(Debug, Clone)]
pub struct FeatureModels {
    pub profile: LanguageProfile,
    pub pmi: Option<PmiLexicons>,
    pub static_lexicons: Option<StaticLexicons>,
    pub tfidf: Option<TfidfModel>,
    pub vectors: Option<WordVectors>,
}

impl FeatureModels {
    pub fn new(profile: LanguageProfile) -> Self {
        Self { profile, pmi: None, static_lexicons: None, tfidf: None, vectors: None }
    }

    /// Fails when a group in `groups` lacks its model.
    pub fn check(&self, groups: &GroupSet) -> Result<()> {
        let missing = |what: &str| Err(Error::Missing(format!("{what} model")));
        if groups.contains(FeatureGroup::Pmi) && self.pmi.is_none() {
            return missing("PMI lexicon");
        }
        if groups.contains(FeatureGroup::Irregular) && self.static_lexicons.is_none() {
            return missing("static lexicon");
        }
        if groups.contains(FeatureGroup::Tfidf) && self.tfidf.is_none() {
            return missing("TF.IDF");
        }
        if groups.contains(FeatureGroup::Embedding) {
            match &self.vectors {
                None => return missing("word embedding"),
                Some(v) if v.dim() != EMBEDDING_DIM => {
                    return Err(Error::DimensionMismatch { expected: EMBEDDING_DIM, found: v.dim() })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// Concatenates the enabled groups in schema order. The task embedding
    /// is required exactly when the schema includes it.
    pub fn assemble(&self, article: &Article, schema: &FeatureSchema, task_embedding: Option<&[f64]>) -> Result<FeatureVector> {
        let groups = schema.groups();
        self.check(groups)?;
        let a = AnalyzedArticle::new(article);
        let mut out = Vec::with_capacity(schema.len());
        for g in groups.iter() {
            match g {
                FeatureGroup::Pmi => out.extend(pmi_features(&a, self.pmi.as_ref().expect("checked"), &self.profile)),
                FeatureGroup::Readability => out.extend(readability_features(&a, &self.profile)),
                FeatureGroup::Orthographic => out.extend(orthographic_features(&a)),
                FeatureGroup::Irregular => {
                    out.extend(irregular_vocab_features(&a, self.static_lexicons.as_ref().expect("checked")))
                }
                FeatureGroup::Tfidf => out.extend(self.tfidf.as_ref().expect("checked").features(&a)),
                FeatureGroup::Grammatical => {
                    out.extend(grammatical_features(&a, &self.profile, &HeuristicTagger::new(&self.profile)))
                }
                FeatureGroup::Embedding => out.extend(embedding_features(&a, self.vectors.as_ref().expect("checked"))?),
                FeatureGroup::TaskEmbedding => {
                    let e = task_embedding.ok_or_else(|| Error::Missing("task embedding".into()))?;
                    if e.len() != TASK_EMBEDDING_DIM {
                        return Err(Error::DimensionMismatch { expected: TASK_EMBEDDING_DIM, found: e.len() });
                    }
                    out.extend_from_slice(e);
                }
            }
        }
        debug_assert_eq!(out.len(), schema.len());
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature `{}`", schema.names()[i])));
        }
        Ok(out)
    }
}
