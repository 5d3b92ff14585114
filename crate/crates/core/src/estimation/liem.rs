use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::labels::FinalLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyMode {
    /// `p*q + (1-p)(1-q)/(m-1)`.
    Exact,
    /// `p*q`, dropping the chance agreement of two wrong labels.
    Approximate,
}

/// Probability that two independent annotations of one request agree, when
/// the first is correct with probability `p`, the second with `q`, and wrong
/// answers are uniform over the other `m - 1` labels.
pub fn expected_consistency(p: f64, q: f64, m: u32, mode: ConsistencyMode) -> Result<f64> {
    if m < 2 {
        return Err(invalid(format!("label count m = {m} must be >= 2")));
    }
    for (name, v) in [("p", p), ("q", q)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(format!("{name} = {v} outside [0, 1]")));
        }
    }
    Ok(match mode {
        ConsistencyMode::Exact => p * q + (1.0 - p) * (1.0 - q) / f64::from(m - 1),
        ConsistencyMode::Approximate => p * q,
    })
}

/// Upper bound `(upper - mu)(mu - lower)` on the variance of any distribution
/// supported on `[lower, upper]` with mean `mu`.
pub fn bhatia_davis_bound(mu: f64, upper: f64, lower: f64) -> Result<f64> {
    if !(lower <= mu && mu <= upper) {
        return Err(invalid(format!("mean {mu} outside [{lower}, {upper}]")));
    }
    Ok((upper - mu) * (mu - lower))
}

/// Bound `33 / (64 n)` on the variance of the mean consistency over `n` requests.
pub fn consistency_variance_bound(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(invalid("sample size must be >= 1"));
    }
    Ok(33.0 / (64.0 * n as f64))
}

/// Mean and variance of `Y = X X'` for independent `X, X'` sharing mean `mu`
/// and variance `var`: `(mu^2, (2 mu^2 + var) var)`.
pub fn product_moments(mu: f64, var: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    (mu2, (2.0 * mu2 + var) * var)
}

/// How in-conflict answers enter the consistency count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictPolicy {
    /// Pair is kept; it matches only when both sides carry the same label,
    /// so two in-conflict answers count as a mismatch.
    #[default]
    PairMismatch,
    /// Pair is dropped if either side is in conflict.
    Exclude,
}

impl fmt::Display for ConflictPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictPolicy::PairMismatch => "pair-mismatch",
            ConflictPolicy::Exclude => "exclude",
        })
    }
}

impl FromStr for ConflictPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pair-mismatch" => Ok(ConflictPolicy::PairMismatch),
            "exclude" => Ok(ConflictPolicy::Exclude),
            other => Err(invalid(format!("unknown conflict policy `{other}`"))),
        }
    }
}

/// Latent accuracy estimate from two duplicate projects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiemEstimate {
    /// Pairs used after applying the conflict policy.
    pub n: usize,
    pub matches: usize,
    /// Fraction of pairs with identical labels.
    pub y_hat: f64,
    /// `sqrt(y_hat)`, the latent accuracy estimate.
    pub mu_hat: f64,
    /// `33 / (64 n)`.
    pub variance_bound: f64,
    /// Three-sigma half-width on `mu^2`: `3 * sqrt(variance_bound)`.
    pub band: f64,
    pub conflict_policy: ConflictPolicy,
}

impl LiemEstimate {
    /// Interval on the latent accuracy obtained by mapping
    /// `y_hat -/+ band` (clipped to `[0, 1]`) through the square root.
    pub fn mu_interval(&self) -> (f64, f64) {
        ((self.y_hat - self.band).max(0.0).sqrt(), (self.y_hat + self.band).min(1.0).sqrt())
    }
}

pub fn liem_estimate(labels_a: &[FinalLabel], labels_b: &[FinalLabel], policy: ConflictPolicy) -> Result<LiemEstimate> {
    if labels_a.len() != labels_b.len() {
        return Err(invalid(format!(
            "label lists differ in length: {} vs {}",
            labels_a.len(),
            labels_b.len()
        )));
    }
    let (mut n, mut matches) = (0usize, 0usize);
    for (a, b) in labels_a.iter().zip(labels_b) {
        match (a.label(), b.label()) {
            (Some(x), Some(y)) => {
                n += 1;
                matches += usize::from(x == y);
            }
            _ if policy == ConflictPolicy::PairMismatch => n += 1,
            _ => {}
        }
    }
    if n == 0 {
        return Err(Error::EmptySample("no usable label pairs".into()));
    }
    let y_hat = matches as f64 / n as f64;
    let variance_bound = consistency_variance_bound(n)?;
    Ok(LiemEstimate {
        n,
        matches,
        y_hat,
        mu_hat: y_hat.sqrt(),
        variance_bound,
        band: 3.0 * variance_bound.sqrt(),
        conflict_policy: policy,
    })
}
