//! Cross-validated evaluation harness for GAN-based minority oversampling:
//! dataset ingestion, stratified folds, the experiment grid, rankings, the
//! SR / λ / generator-size sweeps, and CSV/markdown reports.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod cv;
pub mod data;
pub mod error;
pub mod experiment;
pub mod method;
pub mod report;
pub mod results;
pub mod runner;
pub mod stats;
pub mod sweeps;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use method::Method;
pub use results::{rank_methods, RankingTable, ResultTable};
