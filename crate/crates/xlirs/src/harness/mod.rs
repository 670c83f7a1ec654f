//! Experiment harness: scenario configs, sweeps, CSV output, plot scripts,
//! and the cross-model validation suite.

pub mod config;
pub mod csv;
pub mod plot;
pub mod sweep;
pub mod validate;
