//! Experiment runner around `blotto-core`: configuration files, the parallel
//! suite, CSV/JSON output, oracle checks and the pruning walkthrough.

pub mod config;
pub mod demo;
pub mod output;
pub mod suite;
pub mod verify;

pub use config::{RunConfig, StrategySpec};
pub use suite::{run_suite, SuiteResult};

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "BLOTTO_LAB_OUT";
