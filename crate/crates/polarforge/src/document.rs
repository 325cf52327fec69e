//! Versioned JSON form of a [`CodeDesign`].

use std::fs;
use std::path::Path;

use polarforge_core::CodeDesign;
use serde::{Deserialize, Serialize};

use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Serialized design. Field order is fixed and numbers use the shortest
/// representation that parses back to the same `f64`, so a document read
/// and written again is byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDocument {
    pub schema: u32,
    pub channel_spec: String,
    pub m: u32,
    pub mu: usize,
    pub merge_order: usize,
    pub target_bler: f64,
    pub pe_degraded: Vec<f64>,
    pub pe_upgraded: Vec<f64>,
    pub info_set: Vec<usize>,
    pub rate_degraded: f64,
    pub rate_upgraded: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_exact: Option<f64>,
}

impl DesignDocument {
    pub fn new(channel_spec: impl Into<String>, d: &CodeDesign) -> Self {
        DesignDocument {
            schema: SCHEMA_VERSION,
            channel_spec: channel_spec.into(),
            m: d.m,
            mu: d.mu,
            merge_order: d.merge_order,
            target_bler: d.target_bler,
            pe_degraded: d.pe_degraded.clone(),
            pe_upgraded: d.pe_upgraded.clone(),
            info_set: d.info_set.clone(),
            rate_degraded: d.rate_degraded,
            rate_upgraded: d.rate_upgraded,
            rate_exact: d.rate_exact,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("design documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: DesignDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA_VERSION {
            return Err(Error::Invalid(format!("unsupported design schema {}", doc.schema)));
        }
        let n = 1usize << doc.m.min(usize::BITS - 1);
        if doc.pe_degraded.len() != n || doc.pe_upgraded.len() != n {
            return Err(Error::Invalid(format!("expected {n} error probabilities per bound")));
        }
        Ok(doc)
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        fs::write(path, self.to_json()).map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn rate_gap(&self) -> f64 {
        self.rate_upgraded - self.rate_degraded
    }
}
