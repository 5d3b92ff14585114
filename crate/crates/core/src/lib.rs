//! Agent-based simulation of crowdsourced annotation strategies and
//! ground-truth-free accuracy estimation from duplicate-project consistency.
//!
//! The crate covers four strategies (one grader, double grading with expert
//! conflict resolution, fixed N-grader majority, and dynamic automatic
//! conflict resolution), the consistency-based latent accuracy estimator
//! with its variance bounds, Cohen's kappa, and the disagreement confusion
//! matrix over in-conflict requests. All randomness flows through
//! [`stream::SeedSpec`], so every run is replayable.

pub mod agents;
pub mod cli;
pub mod config;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod io;
pub mod labels;
pub mod stream;
pub mod strategies;

pub use error::{Error, Result};
pub use labels::{FinalLabel, LabelId, LabelSpace, Request};
