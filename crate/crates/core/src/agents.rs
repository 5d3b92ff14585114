//! Worker pools, request batches and the single annotation act.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::labels::{LabelId, LabelSpace, Request};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkerId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkerKind {
    Regular,
    Expert,
}

/// An annotator with fixed capability `c` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Worker {
    pub id: WorkerId,
    pub capability: f64,
    pub kind: WorkerKind,
}

/// Closed interval a capability is drawn from uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapabilityRange {
    pub lo: f64,
    pub hi: f64,
}

impl CapabilityRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let r = CapabilityRange { lo, hi };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 <= self.lo && self.lo <= self.hi && self.hi <= 1.0) {
            return Err(invalid(format!(
                "capability range [{}, {}] must satisfy 0 <= lo <= hi <= 1",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * rng.random::<f64>()
        }
    }
}

/// Pool shape: how many regulars and experts, and their capability ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolParams {
    pub regular_count: u32,
    pub regular_range: CapabilityRange,
    pub expert_count: u32,
    pub expert_range: CapabilityRange,
}

impl Default for PoolParams {
    fn default() -> Self {
        PoolParams {
            regular_count: 100,
            regular_range: CapabilityRange { lo: 0.8, hi: 1.0 },
            expert_count: 20,
            expert_range: CapabilityRange { lo: 0.9, hi: 1.0 },
        }
    }
}

impl PoolParams {
    pub fn validate(&self) -> Result<()> {
        if self.regular_count == 0 || self.expert_count == 0 {
            return Err(invalid("worker pools need at least one regular and one expert"));
        }
        self.regular_range.validate()?;
        self.expert_range.validate()
    }
}

/// Regular annotators and experts. Regulars hold ids `0..R`, experts `R..R+E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerPool {
    regulars: Vec<Worker>,
    experts: Vec<Worker>,
}

impl WorkerPool {
    /// Builds a pool from explicit capabilities.
    pub fn from_capabilities(regulars: &[f64], experts: &[f64]) -> Result<Self> {
        if regulars.is_empty() || experts.is_empty() {
            return Err(invalid("worker pools need at least one regular and one expert"));
        }
        if let Some(c) = regulars.iter().chain(experts).find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(invalid(format!("capability {c} outside [0, 1]")));
        }
        let make = |offset: usize, kind, caps: &[f64]| {
            caps.iter()
                .enumerate()
                .map(|(i, &capability)| Worker { id: WorkerId((offset + i) as u32), capability, kind })
                .collect::<Vec<_>>()
        };
        Ok(WorkerPool {
            regulars: make(0, WorkerKind::Regular, regulars),
            experts: make(regulars.len(), WorkerKind::Expert, experts),
        })
    }

    pub fn regulars(&self) -> &[Worker] {
        &self.regulars
    }

    pub fn experts(&self) -> &[Worker] {
        &self.experts
    }

    /// Looks a worker up by id in either list.
    pub fn worker(&self, id: WorkerId) -> Option<&Worker> {
        let i = id.0 as usize;
        if i < self.regulars.len() {
            Some(&self.regulars[i])
        } else {
            self.experts.get(i - self.regulars.len())
        }
    }
}

/// Draws capabilities independently and uniformly from the configured ranges.
pub fn sample_worker_pool<R: Rng + ?Sized>(params: &PoolParams, rng: &mut R) -> Result<WorkerPool> {
    params.validate()?;
    let regulars: Vec<f64> = (0..params.regular_count).map(|_| params.regular_range.sample(rng)).collect();
    let experts: Vec<f64> = (0..params.expert_count).map(|_| params.expert_range.sample(rng)).collect();
    WorkerPool::from_capabilities(&regulars, &experts)
}

/// Batch shape: request count, label count and the difficulty distribution
/// `clamp(N(mean, sd), 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchParams {
    pub requests: u32,
    pub labels: u32,
    pub difficulty_mean: f64,
    pub difficulty_sd: f64,
}

impl Default for BatchParams {
    fn default() -> Self {
        BatchParams { requests: 10_000, labels: 60, difficulty_mean: 0.9, difficulty_sd: 0.1 }
    }
}

impl BatchParams {
    pub fn validate(&self) -> Result<()> {
        if self.requests == 0 {
            return Err(invalid("a batch needs at least one request"));
        }
        LabelSpace::new(self.labels)?;
        if !self.difficulty_mean.is_finite() {
            return Err(invalid("difficulty mean must be finite"));
        }
        if !(self.difficulty_sd >= 0.0 && self.difficulty_sd.is_finite()) {
            return Err(invalid(format!("difficulty sd {} must be >= 0", self.difficulty_sd)));
        }
        Ok(())
    }
}

/// Requests with ids `0..n` over one label space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestBatch {
    requests: Vec<Request>,
    label_space: LabelSpace,
}

impl RequestBatch {
    /// Checks ids are `0..n` and every ground truth lies in `label_space`.
    pub fn new(requests: Vec<Request>, label_space: LabelSpace) -> Result<Self> {
        if requests.is_empty() {
            return Err(invalid("a batch needs at least one request"));
        }
        for (i, r) in requests.iter().enumerate() {
            if r.id as usize != i {
                return Err(invalid(format!("request at position {i} has id {}", r.id)));
            }
            Request::new(r.id, r.ground_truth, r.difficulty, label_space)?;
        }
        Ok(RequestBatch { requests, label_space })
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn label_space(&self) -> LabelSpace {
        self.label_space
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }
}

pub fn sample_request_batch<R: Rng + ?Sized>(params: &BatchParams, rng: &mut R) -> Result<RequestBatch> {
    params.validate()?;
    let space = LabelSpace::new(params.labels)?;
    // sd == 0 is a degenerate normal; Normal::new accepts it but skip the draw.
    let normal = Normal::new(params.difficulty_mean, params.difficulty_sd)
        .map_err(|e| invalid(format!("difficulty distribution: {e}")))?;
    let requests = (0..params.requests)
        .map(|id| {
            let difficulty = if params.difficulty_sd == 0.0 {
                params.difficulty_mean
            } else {
                normal.sample(rng)
            };
            Request {
                id,
                ground_truth: LabelId(rng.random_range(0..params.labels)),
                difficulty: difficulty.clamp(0.0, 1.0),
            }
        })
        .collect();
    Ok(RequestBatch { requests, label_space: space })
}

/// How a worker turns a request into a label.
pub trait AnnotationModel: Sync {
    fn annotate<R: Rng + ?Sized>(&self, worker: &Worker, request: &Request, space: LabelSpace, rng: &mut R) -> LabelId;
}

/// Correct with probability `difficulty * capability`, otherwise a label
/// drawn uniformly from the `m - 1` wrong ones.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformNoise;

impl AnnotationModel for UniformNoise {
    fn annotate<R: Rng + ?Sized>(&self, worker: &Worker, request: &Request, space: LabelSpace, rng: &mut R) -> LabelId {
        annotate(worker, request, space, rng)
    }
}

pub fn annotate<R: Rng + ?Sized>(worker: &Worker, request: &Request, space: LabelSpace, rng: &mut R) -> LabelId {
    let p_correct = request.difficulty * worker.capability;
    if rng.random::<f64>() < p_correct {
        request.ground_truth
    } else {
        uniform_wrong_label(request.ground_truth, space, rng)
    }
}

/// Uniform draw from `space \ {truth}`.
pub fn uniform_wrong_label<R: Rng + ?Sized>(truth: LabelId, space: LabelSpace, rng: &mut R) -> LabelId {
    let v = rng.random_range(0..space.size() - 1);
    LabelId(if v >= truth.0 { v + 1 } else { v })
}
