//! Experiment configuration: the JSON surface of `permlab mc` and
//! `permlab check`.

use permlab_core::samplers::DistributionSpec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config error: {0}")]
    Invalid(String),
    #[error("config i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LcsMean,
    Fluctuation,
    LimitShape,
    InvariantSuite,
    CycleStartDistribution,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist1: Option<DistributionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist2: Option<DistributionSpec>,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Advisory worker count; results never depend on it.
    #[serde(default)]
    pub thread_hint: usize,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be >= 1".into()));
        }
        if self.n == 0 {
            return Err(ConfigError::Invalid("n must be >= 1".into()));
        }
        for (name, spec) in [("dist1", &self.dist1), ("dist2", &self.dist2)] {
            if let Some(spec) = spec {
                spec.validate()
                    .map_err(|e| ConfigError::Invalid(format!("{name}: {e}")))?;
            }
        }
        match self.experiment {
            ExperimentKind::LcsMean => {
                let d1 = self.require_dist1()?;
                let d2 = self
                    .dist2
                    .as_ref()
                    .ok_or_else(|| ConfigError::Invalid("lcs_mean requires dist2".into()))?;
                self.check_sizes(d1)?;
                self.check_sizes(d2)?;
            }
            ExperimentKind::Fluctuation => {
                let d1 = self.require_dist1()?;
                self.check_sizes(d1)?;
                if let Some(d2) = &self.dist2 {
                    self.check_sizes(d2)?;
                }
                if self.n < 100 {
                    return Err(ConfigError::Invalid(
                        "fluctuation requires n >= 100".into(),
                    ));
                }
            }
            ExperimentKind::LimitShape => {
                let d1 = self.require_dist1()?;
                self.check_sizes(d1)?;
                if !d1.is_conjugation_invariant() {
                    return Err(ConfigError::Invalid(
                        "limit_shape requires a conjugation-invariant dist1".into(),
                    ));
                }
            }
            ExperimentKind::InvariantSuite => {}
            ExperimentKind::CycleStartDistribution => {
                let d1 = self.require_dist1()?;
                let d2 = self.dist2.as_ref().ok_or_else(|| {
                    ConfigError::Invalid("cycle_start_distribution requires dist2".into())
                })?;
                self.check_sizes(d1)?;
                self.check_sizes(d2)?;
                if !d1.is_conjugation_invariant() || !d2.is_conjugation_invariant() {
                    return Err(ConfigError::Invalid(
                        "cycle_start_distribution requires conjugation-invariant laws".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn require_dist1(&self) -> Result<&DistributionSpec, ConfigError> {
        self.dist1
            .as_ref()
            .ok_or_else(|| ConfigError::Invalid("experiment requires dist1".into()))
    }

    fn check_sizes(&self, spec: &DistributionSpec) -> Result<(), ConfigError> {
        if spec.n() != self.n {
            return Err(ConfigError::Invalid(format!(
                "distribution size {} does not match experiment n = {}",
                spec.n(),
                self.n
            )));
        }
        Ok(())
    }
}
