//! JSON and CSV results. Every artifact carries a [`RunManifest`].
//!
//! Counts and totals are written as decimal strings since they can exceed
//! the integers JSON readers handle exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tsig_core::engine::{MMode, Mode, SignatureVector};
use tsig_core::{Error, ReliabilityCurve};

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("invalid JSON artifact: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV output: {0}")]
    Csv(#[from] csv::Error),
    #[error("count `{0}` is not a nonnegative integer")]
    BadCount(String),
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// `sha256:<hex>` of the input file bytes.
    pub input_digest: Option<String>,
    pub flags: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub sample_count: Option<u64>,
    pub duration_seconds: f64,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, input: Option<&[u8]>) -> Self {
        RunManifest {
            command: command.to_string(),
            input_digest: input.map(digest),
            flags: BTreeMap::new(),
            seed: None,
            workers: 1,
            sample_count: None,
            duration_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn flag(mut self, key: &str, value: impl ToString) -> Self {
        self.flags.insert(key.to_string(), value.to_string());
        self
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureArtifact {
    pub manifest: RunManifest,
    pub n: usize,
    pub mode: String,
    pub m_mode: String,
    pub counts: Vec<String>,
    pub total: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<Vec<f64>>,
}

fn parse_count(s: &str) -> Result<u128, ArtifactError> {
    s.parse().map_err(|_| ArtifactError::BadCount(s.to_string()))
}

impl SignatureArtifact {
    pub fn new(manifest: RunManifest, sig: &SignatureVector, std_error: Option<&[f64]>) -> Self {
        SignatureArtifact {
            manifest,
            n: sig.len(),
            mode: sig.mode().as_str().to_string(),
            m_mode: sig.m_mode().as_str().to_string(),
            counts: sig.counts().iter().map(u128::to_string).collect(),
            total: sig.total().to_string(),
            values: sig.values().to_vec(),
            std_error: std_error.map(<[f64]>::to_vec),
        }
    }

    /// Rebuilds the vector from the exact counts, checking them against the
    /// stored total.
    pub fn to_vector(&self) -> Result<SignatureVector, ArtifactError> {
        let counts = self.counts.iter().map(|c| parse_count(c)).collect::<Result<Vec<_>, _>>()?;
        let mode: Mode = self.mode.parse()?;
        let m_mode: MMode = self.m_mode.parse()?;
        let sig = SignatureVector::from_counts(counts, mode, m_mode)?;
        if sig.total() != parse_count(&self.total)? {
            return Err(Error::Argument("counts do not add up to the stated total".into()).into());
        }
        Ok(sig)
    }

    pub fn from_json(text: &str) -> Result<Self, ArtifactError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serialises");
        s.push('\n');
        s
    }

    /// Manifest as a `#` comment line, then `i,count,value[,std_error]`.
    pub fn to_csv(&self) -> Result<String, ArtifactError> {
        let mut out = format!("# {}\n", serde_json::to_string(&self.manifest)?);
        out.push_str(&format!("# n={} mode={} m_mode={} total={}\n", self.n, self.mode, self.m_mode, self.total));
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["i", "count", "value"];
        if self.std_error.is_some() {
            header.push("std_error");
        }
        w.write_record(&header)?;
        for i in 0..self.n {
            let mut rec = vec![(i + 1).to_string(), self.counts[i].clone(), self.values[i].to_string()];
            if let Some(se) = &self.std_error {
                rec.push(se[i].to_string());
            }
            w.write_record(&rec)?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("utf-8"));
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    /// `poisson` or `binomial`.
    pub kind: String,
    pub rate: f64,
    /// Link count for the binomial process.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<usize>,
    /// Link lifetime law for the binomial process.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifetime: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveArtifact {
    pub manifest: RunManifest,
    pub process: ProcessSpec,
    /// Mode of the signature fed into the mixture.
    pub signature_mode: String,
    pub signature: Vec<f64>,
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
}

impl CurveArtifact {
    pub fn new(
        manifest: RunManifest,
        process: ProcessSpec,
        signature_mode: &str,
        signature: &[f64],
        curve: &ReliabilityCurve,
    ) -> Self {
        CurveArtifact {
            manifest,
            process,
            signature_mode: signature_mode.to_string(),
            signature: signature.to_vec(),
            times: curve.times.clone(),
            survival: curve.survival.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, ArtifactError> {
        let mut out = format!("# {}\n", serde_json::to_string(&self.manifest)?);
        out.push_str(&format!("# process={}\n", serde_json::to_string(&self.process)?));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "survival"])?;
        for (t, s) in self.times.iter().zip(&self.survival) {
            w.write_record([t.to_string(), s.to_string()])?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("utf-8"));
        Ok(out)
    }
}
