//! Label space, requests and final answers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Token used for in-conflict answers in every delimited file.
pub const IN_CONFLICT_TOKEN: &str = "IN_CONFLICT";

/// An opaque label identifier, dense in `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The finite set of permissible labels `{0, .., m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelSpace {
    size: u32,
}

impl LabelSpace {
    /// Builds a label space of `m` labels. Requires `m >= 2`: with a single
    /// label there is no wrong answer to draw.
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("label space needs at least 2 labels, got {m}")));
        }
        Ok(LabelSpace { size: m })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, label: LabelId) -> bool {
        label.0 < self.size
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> {
        (0..self.size).map(LabelId)
    }
}

/// Alias kept for callers that prefer the operation name.
pub fn make_label_space(m: u32) -> Result<LabelSpace> {
    LabelSpace::new(m)
}

/// An annotation item with a single ground-truth label and a difficulty in `[0, 1]`.
///
/// Difficulty multiplies a worker's capability to give the probability of a
/// correct answer, so `1.0` is the easiest request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: u32,
    pub ground_truth: LabelId,
    pub difficulty: f64,
}

impl Request {
    pub fn new(id: u32, ground_truth: LabelId, difficulty: f64, space: LabelSpace) -> Result<Self> {
        if !space.contains(ground_truth) {
            return Err(invalid(format!(
                "request {id}: ground truth {ground_truth} outside label space of size {}",
                space.size()
            )));
        }
        if !(0.0..=1.0).contains(&difficulty) {
            return Err(invalid(format!("request {id}: difficulty {difficulty} outside [0, 1]")));
        }
        Ok(Request { id, ground_truth, difficulty })
    }
}

/// The answer a project records for a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinalLabel {
    Assigned(LabelId),
    /// No strict majority was reached within the grade budget.
    InConflict,
}

impl FinalLabel {
    pub fn label(self) -> Option<LabelId> {
        match self {
            FinalLabel::Assigned(l) => Some(l),
            FinalLabel::InConflict => None,
        }
    }

    pub fn is_in_conflict(self) -> bool {
        matches!(self, FinalLabel::InConflict)
    }

    /// True only for an assigned label equal to `truth`; an in-conflict
    /// answer never matches.
    pub fn is_correct(self, truth: LabelId) -> bool {
        self.label() == Some(truth)
    }
}

impl From<LabelId> for FinalLabel {
    fn from(l: LabelId) -> Self {
        FinalLabel::Assigned(l)
    }
}

impl fmt::Display for FinalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalLabel::Assigned(l) => l.fmt(f),
            FinalLabel::InConflict => f.write_str(IN_CONFLICT_TOKEN),
        }
    }
}

impl FromStr for FinalLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == IN_CONFLICT_TOKEN {
            return Ok(FinalLabel::InConflict);
        }
        s.parse::<u32>()
            .map(|v| FinalLabel::Assigned(LabelId(v)))
            .map_err(|_| invalid(format!("`{s}` is neither a label id nor {IN_CONFLICT_TOKEN}")))
    }
}
