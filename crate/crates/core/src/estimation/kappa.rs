use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agents::WorkerId;
use crate::error::{invalid, Error, Result};
use crate::labels::{FinalLabel, LabelSpace};
use crate::strategies::ProjectResult;

/// Two-rater Cohen's kappa with its agreement components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub pr_a: f64,
    pub pr_e: f64,
    pub kappa: f64,
}

// Slot m holds in-conflict answers, treated as one extra category.
fn category(label: FinalLabel, space: LabelSpace) -> Result<usize> {
    match label {
        FinalLabel::Assigned(l) if space.contains(l) => Ok(l.index()),
        FinalLabel::Assigned(l) => Err(invalid(format!("label {l} outside label space"))),
        FinalLabel::InConflict => Ok(space.size() as usize),
    }
}

pub fn cohen_kappa(labels_a: &[FinalLabel], labels_b: &[FinalLabel], space: LabelSpace) -> Result<KappaResult> {
    if labels_a.len() != labels_b.len() {
        return Err(invalid(format!("rater lists differ in length: {} vs {}", labels_a.len(), labels_b.len())));
    }
    if labels_a.is_empty() {
        return Err(invalid("kappa of empty rater lists"));
    }
    let k = space.size() as usize + 1;
    let mut marginal_a = vec![0u64; k];
    let mut marginal_b = vec![0u64; k];
    let mut agree = 0u64;
    for (&a, &b) in labels_a.iter().zip(labels_b) {
        let (ca, cb) = (category(a, space)?, category(b, space)?);
        marginal_a[ca] += 1;
        marginal_b[cb] += 1;
        agree += u64::from(ca == cb);
    }
    let n = labels_a.len() as f64;
    let pr_a = agree as f64 / n;
    let pr_e = marginal_a.iter().zip(&marginal_b).map(|(&x, &y)| (x as f64 / n) * (y as f64 / n)).sum::<f64>();
    if pr_e >= 1.0 {
        return Err(Error::UndefinedKappa);
    }
    Ok(KappaResult { pr_a, pr_e, kappa: (pr_a - pr_e) / (1.0 - pr_e) })
}

/// Kappa for one pair of workers over the requests both graded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseKappa {
    pub worker_a: WorkerId,
    pub worker_b: WorkerId,
    pub shared: usize,
    /// `None` when kappa is undefined for the shared requests.
    pub kappa: Option<KappaResult>,
}

/// Pairwise kappa table over every worker pair that co-graded at least one request.
pub fn pairwise_kappa(project: &ProjectResult, space: LabelSpace) -> Result<Vec<PairwiseKappa>> {
    let mut by_pair: BTreeMap<(WorkerId, WorkerId), (Vec<FinalLabel>, Vec<FinalLabel>)> = BTreeMap::new();
    let mut start = 0;
    while start < project.ledger.len() {
        let req = project.ledger[start].request_id;
        let end = project.ledger[start..].iter().position(|g| g.request_id != req).map_or(project.ledger.len(), |p| start + p);
        let grades = &project.ledger[start..end];
        for (i, x) in grades.iter().enumerate() {
            for y in &grades[i + 1..] {
                let (first, second) = if x.worker_id <= y.worker_id { (x, y) } else { (y, x) };
                let entry = by_pair.entry((first.worker_id, second.worker_id)).or_default();
                entry.0.push(first.label.into());
                entry.1.push(second.label.into());
            }
        }
        start = end;
    }
    by_pair
        .into_iter()
        .map(|((worker_a, worker_b), (a, b))| {
            let kappa = match cohen_kappa(&a, &b, space) {
                Ok(k) => Some(k),
                Err(Error::UndefinedKappa) => None,
                Err(e) => return Err(e),
            };
            Ok(PairwiseKappa { worker_a, worker_b, shared: a.len(), kappa })
        })
        .collect()
}
