//! Calibration constants for the experiment harness, loaded from the
//! bundled `calibration.toml` so that every desk-scale threshold lives
//! in one auditable place.

use serde::Deserialize;

pub const CALIBRATION_TOML: &str = include_str!("../calibration.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Calibration {
    pub lcs_mean: LcsMeanCal,
    pub fluctuation: FluctuationCal,
    pub limit_shape: LimitShapeCal,
    pub involution_fixed_points: InvolutionCal,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LcsMeanCal {
    pub normalized_mean_window: [f64; 2],
    pub max_standard_error: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FluctuationCal {
    pub max_ks_distance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LimitShapeCal {
    pub sup_threshold: f64,
    pub min_fraction_below: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct InvolutionCal {
    pub normalized_mean_window: [f64; 2],
}

impl Calibration {
    pub fn bundled() -> Self {
        toml::from_str(CALIBRATION_TOML).expect("bundled calibration is valid")
    }
}
