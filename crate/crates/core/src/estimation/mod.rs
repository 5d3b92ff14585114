//! Latent-accuracy estimation from duplicate-project consistency, plus
//! agreement statistics.

mod confusion;
mod kappa;
mod liem;

pub use confusion::{conflict_confusion_matrix, confusion_from_parts, ConfusionMatrix};
pub use kappa::{cohen_kappa, pairwise_kappa, KappaResult, PairwiseKappa};
pub use liem::{
    bhatia_davis_bound, consistency_variance_bound, expected_consistency, liem_estimate, product_moments,
    ConflictPolicy, ConsistencyMode, LiemEstimate,
};
