use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::labels::{FinalLabel, LabelSpace};
use crate::strategies::{GradeRecord, ProjectResult};

/// Disagreement counts among the grades of in-conflict requests.
///
/// `raw` and `normalized` are dense row-major `m x m` matrices. They are
/// symmetric with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    size: usize,
    raw: Vec<u64>,
    normalized: Vec<f64>,
    /// Share of each label among all grades in the project.
    background: Vec<f64>,
}

impl ConfusionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn raw(&self, i: usize, j: usize) -> u64 {
        self.raw[i * self.size + j]
    }

    pub fn normalized(&self, i: usize, j: usize) -> f64 {
        self.normalized[i * self.size + j]
    }

    pub fn background(&self) -> &[f64] {
        &self.background
    }

    pub fn is_zero(&self) -> bool {
        self.raw.iter().all(|&c| c == 0)
    }

    /// Cell `(i, j)` with `i < j` holding the largest normalized value, if any is nonzero.
    pub fn max_normalized_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), f64)> = None;
        for i in 0..self.size {
            for j in i + 1..self.size {
                let v = self.normalized(i, j);
                if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
                    best = Some(((i, j), v));
                }
            }
        }
        best.map(|(cell, _)| cell)
    }
}

/// Counts, for every in-conflict request, each unordered pair of grades with
/// different labels into cells `(i, j)` and `(j, i)`. The normalized matrix
/// divides cell `(i, j)` by `sqrt(f_i f_j)`, where `f_k` is label `k`'s share
/// of all grades in the project.
pub fn conflict_confusion_matrix(project: &ProjectResult, space: LabelSpace) -> Result<ConfusionMatrix> {
    confusion_from_parts(&project.final_labels, &project.ledger, space)
}

/// Same as [`conflict_confusion_matrix`] for final labels and a ledger read
/// from separate files.
pub fn confusion_from_parts(final_labels: &[FinalLabel], ledger: &[GradeRecord], space: LabelSpace) -> Result<ConfusionMatrix> {
    let m = space.size() as usize;
    let mut raw = vec![0u64; m * m];
    let mut label_counts = vec![0u64; m];

    let mut grades = vec![Vec::new(); final_labels.len()];
    for g in ledger {
        if !space.contains(g.label) {
            return Err(invalid(format!("ledger label {} outside label space of size {m}", g.label)));
        }
        let Some(slot) = grades.get_mut(g.request_id as usize) else {
            return Err(invalid(format!("ledger request {} has no final label", g.request_id)));
        };
        slot.push(g.label);
        label_counts[g.label.index()] += 1;
    }

    for (request, grades) in grades.iter().enumerate() {
        if !final_labels[request].is_in_conflict() {
            continue;
        }
        for (x, a) in grades.iter().enumerate() {
            for b in &grades[x + 1..] {
                if a != b {
                    raw[a.index() * m + b.index()] += 1;
                    raw[b.index() * m + a.index()] += 1;
                }
            }
        }
    }

    let total = ledger.len() as f64;
    let background: Vec<f64> =
        label_counts.iter().map(|&c| if total > 0.0 { c as f64 / total } else { 0.0 }).collect();
    let normalized = (0..m * m)
        .map(|cell| {
            let (i, j) = (cell / m, cell % m);
            let scale = (background[i] * background[j]).sqrt();
            if raw[cell] == 0 || scale == 0.0 {
                0.0
            } else {
                raw[cell] as f64 / scale
            }
        })
        .collect();

    Ok(ConfusionMatrix { size: m, raw, normalized, background })
}
