//! Machine-readable experiment reports.
//!
//! The JSON layout has stable top-level keys `config`, `per_trial`,
//! `aggregates` and `meta`; the CSV export mirrors `per_trial` as flat
//! columns.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub stats: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub version: String,
    pub f2_checksum: String,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub per_trial: Vec<TrialRecord>,
    pub aggregates: BTreeMap<String, f64>,
    pub meta: ReportMeta,
}

/// SHA-256 of the F₂ table actually in use, recorded for provenance.
pub fn f2_checksum(csv: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(csv.as_bytes());
    format!("{:x}", hasher.finalize())
}

impl ExperimentReport {
    pub fn new(
        config: ExperimentConfig,
        per_trial: Vec<TrialRecord>,
        aggregates: BTreeMap<String, f64>,
        wall_time_s: f64,
        warnings: Vec<String>,
    ) -> Self {
        ExperimentReport {
            config,
            per_trial,
            aggregates,
            meta: ReportMeta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                f2_checksum: f2_checksum(permlab_core::twstat::F2_TABLE_CSV),
                wall_time_s,
                warnings,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Validates the serialized form against the stable schema before
    /// writing: the four top-level keys must be present and `per_trial`
    /// entries must carry `trial` and `stats`.
    pub fn validate_schema(&self) -> Result<(), String> {
        let value: serde_json::Value =
            serde_json::from_str(&self.to_json()).map_err(|e| e.to_string())?;
        let obj = value.as_object().ok_or("report is not an object")?;
        for key in ["config", "per_trial", "aggregates", "meta"] {
            if !obj.contains_key(key) {
                return Err(format!("missing top-level key '{key}'"));
            }
        }
        for (i, t) in obj["per_trial"]
            .as_array()
            .ok_or("per_trial is not an array")?
            .iter()
            .enumerate()
        {
            if t.get("trial").is_none() || t.get("stats").is_none() {
                return Err(format!("per_trial[{i}] missing trial/stats"));
            }
        }
        let meta = obj["meta"].as_object().ok_or("meta is not an object")?;
        for key in ["version", "f2_checksum", "wall_time_s"] {
            if !meta.contains_key(key) {
                return Err(format!("meta missing '{key}'"));
            }
        }
        Ok(())
    }

    pub fn write_json(&self, mut out: impl Write) -> std::io::Result<()> {
        self.validate_schema()
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        out.write_all(self.to_json().as_bytes())?;
        out.write_all(b"\n")
    }

    /// Flat per-trial CSV: `trial` followed by the union of stat keys.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut keys: Vec<&str> = Vec::new();
        for t in &self.per_trial {
            for k in t.stats.keys() {
                if !keys.contains(&k.as_str()) {
                    keys.push(k);
                }
            }
        }
        keys.sort_unstable();
        write!(out, "trial")?;
        for k in &keys {
            write!(out, ",{k}")?;
        }
        writeln!(out)?;
        for t in &self.per_trial {
            write!(out, "{}", t.trial)?;
            for k in &keys {
                match t.stats.get(*k) {
                    Some(v) => write!(out, ",{v}")?,
                    None => write!(out, ",")?,
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Mean and standard error of a sample.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
