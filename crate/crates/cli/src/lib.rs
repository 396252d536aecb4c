//! Seeded Monte Carlo harness and command-line surface for the
//! permutation-statistics library in `permlab-core`.

pub mod calibration;
pub mod config;
pub mod experiments;
pub mod report;
