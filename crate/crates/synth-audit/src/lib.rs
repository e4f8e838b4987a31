//! Privacy auditing for synthetic tabular data.
//!
//! The toolkit answers two questions about a private dataset that is about to
//! be released as synthetic data:
//!
//! 1. *Which records are most exposed?* Every record gets a vulnerability
//!    score: its mean distance to its k closest neighbors. Records far from
//!    everyone else are ranked first, with random, rare-value, and
//!    log-likelihood selectors as baselines.
//! 2. *How exposed are they, empirically?* For each selected record the
//!    pipeline plays a membership-inference privacy game: many shadow
//!    generators are trained with and without the record, a meta-classifier
//!    learns to tell the two worlds apart from target-anchored counting
//!    queries (or a target-attention network), and the per-record risk is
//!    reported as AUC over balanced test worlds.
//!
//! Built-in generators: sequential CART (`synthpop`), a greedy Bayesian
//! network (`baynet`), and its differentially private variant (`privbayes`).
//!
//! Start with the runnable examples (`cargo run --release --example
//! score_ranking`) or the `synth-audit` binary.

pub mod attack;
pub mod attention;
pub mod cli;
pub mod config;
pub mod data;
pub mod demo;
pub mod encoding;
pub mod error;
pub mod forest;
pub mod generators;
pub mod plot;
pub mod query;
pub mod report;
pub mod seed;
pub mod selection;

pub use error::{Error, Result};
