//! Batch command surface: JSON run configs, dispatch, and JSON/CSV reports.

mod commands;
mod config;
mod report;

pub use commands::{run, RunError};
pub use config::{
    Command, ConfigError, ConstantData, ConstantsConfig, EnsembleSection, Operator, OutputPaths, Prepared, RunConfig,
    ScalarText, SEED_ENV,
};
pub use report::{Check, Provenance, Report, ResultRow, CSV_COLUMNS};
