//! JSON model files. Each carries a format version plus the config hash
//! and seed of the run that produced it.

use fakenews_core::features::{FeatureSchema, Scaler, TfidfModel};
use fakenews_core::svm::{GridResult, SvmModel};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::ArtifactMeta;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfArtifact {
    pub schema_version: u32,
    #[serde(flatten)]
    pub meta: ArtifactMeta,
    pub model: TfidfModel,
}

/// Feature schema and the max-abs scaler fitted on the training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturesArtifact {
    pub schema_version: u32,
    #[serde(flatten)]
    pub meta: ArtifactMeta,
    pub schema_hash: String,
    pub schema: FeatureSchema,
    pub scaler: Scaler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmArtifact {
    pub schema_version: u32,
    #[serde(flatten)]
    pub meta: ArtifactMeta,
    pub schema_hash: String,
    pub model: SvmModel,
    pub grid: GridResult,
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("artifact serializes");
    v.push(b'\n');
    v
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_slice(&bytes).map_err(|e| CliError::format(path, e.to_string()))?;
    let version = value.get("schema_version").and_then(serde_json::Value::as_u64);
    if version != Some(u64::from(SCHEMA_VERSION)) {
        return Err(CliError::Mismatch(format!(
            "{}: schema_version {version:?}, expected {SCHEMA_VERSION}",
            path.display()
        )));
    }
    serde_json::from_value(value).map_err(|e| CliError::format(path, e.to_string()))
}

pub fn read_tfidf(path: &Path) -> Result<TfidfArtifact> {
    let mut a: TfidfArtifact = read_json(path)?;
    a.model.reindex();
    Ok(a)
}
