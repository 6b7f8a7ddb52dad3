//! Experiment orchestration for the pair-statistics laboratory: Monte Carlo
//! estimation against exact finite-N formulas, distribution tests against
//! the limit laws, and the exact cross-module consistency suite.

pub mod config;
pub mod ks;
pub mod report;
pub mod runner;
pub mod suite;

/// git-describe-style identifier embedded in JSON summaries.
pub fn version_string() -> String {
    format!("cbe-harness-v{}", env!("CARGO_PKG_VERSION"))
}
