//! Annotation strategies: one-grader, double-graded with expert conflict
//! resolution, fixed N-graded majority, and dynamic automatic conflict
//! resolution (DACR).
//!
//! Every request draws from its own stream, `project_seed.child(request_id)`,
//! so requests can be graded in any order or in parallel and the result is
//! the same. No worker grades the same request twice.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{AnnotationModel, RequestBatch, UniformNoise, Worker, WorkerId, WorkerPool};
use crate::error::{invalid, Error, Result};
use crate::labels::{FinalLabel, LabelId, Request};
use crate::stream::SeedSpec;

/// Which strategy to run, with its grade budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrategyConfig {
    OneGrader,
    DgCr,
    NGraded { n: u32 },
    Dacr { min_grades: u32, max_grades: u32 },
}

impl StrategyConfig {
    /// The five configurations compared in the reference study.
    pub fn reference_set() -> Vec<StrategyConfig> {
        vec![
            StrategyConfig::OneGrader,
            StrategyConfig::DgCr,
            StrategyConfig::NGraded { n: 5 },
            StrategyConfig::NGraded { n: 7 },
            StrategyConfig::Dacr { min_grades: 2, max_grades: 5 },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StrategyConfig::NGraded { n: 0 } => Err(invalid("n-graded needs n >= 1")),
            StrategyConfig::Dacr { min_grades, max_grades } if min_grades < 2 || min_grades > max_grades => {
                Err(invalid(format!("dacr needs 2 <= min ({min_grades}) <= max ({max_grades})")))
            }
            _ => Ok(()),
        }
    }

    /// Checks the pool is large enough for this strategy's distinct-worker draws.
    pub fn check_pool(&self, pool: &WorkerPool) -> Result<()> {
        self.validate()?;
        let regulars = pool.regulars().len();
        let needed = match *self {
            StrategyConfig::OneGrader => 1,
            StrategyConfig::DgCr => 2,
            StrategyConfig::NGraded { n } => n as usize,
            StrategyConfig::Dacr { max_grades, .. } => max_grades as usize,
        };
        if needed > regulars {
            return Err(invalid(format!("{self} needs {needed} distinct regular workers, pool has {regulars}")));
        }
        if matches!(self, StrategyConfig::DgCr) && pool.experts().is_empty() {
            return Err(invalid("dg-cr needs at least one expert"));
        }
        Ok(())
    }
}

impl fmt::Display for StrategyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyConfig::OneGrader => f.write_str("one-grader"),
            StrategyConfig::DgCr => f.write_str("dg-cr"),
            StrategyConfig::NGraded { n } => write!(f, "n-graded-{n}"),
            StrategyConfig::Dacr { min_grades, max_grades } => write!(f, "dacr-{min_grades}-{max_grades}"),
        }
    }
}

impl FromStr for StrategyConfig {
    type Err = Error;

    /// Parses the identifiers produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.parse::<u32>().map_err(|_| invalid(format!("bad strategy id `{s}`")));
        let cfg = match s {
            "one-grader" => StrategyConfig::OneGrader,
            "dg-cr" => StrategyConfig::DgCr,
            _ => {
                if let Some(n) = s.strip_prefix("n-graded-") {
                    StrategyConfig::NGraded { n: num(n)? }
                } else if let Some(rest) = s.strip_prefix("dacr-") {
                    let (lo, hi) = rest.split_once('-').ok_or_else(|| invalid(format!("bad strategy id `{s}`")))?;
                    StrategyConfig::Dacr { min_grades: num(lo)?, max_grades: num(hi)? }
                } else {
                    return Err(invalid(format!("unknown strategy `{s}`")));
                }
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One grade in a project's history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeRecord {
    pub request_id: u32,
    pub sequence_index: u32,
    pub worker_id: WorkerId,
    pub label: LabelId,
}

/// Final answers plus the full grade ledger, ordered by request id then sequence index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectResult {
    pub strategy: StrategyConfig,
    pub final_labels: Vec<FinalLabel>,
    pub ledger: Vec<GradeRecord>,
}

impl ProjectResult {
    pub fn total_grades(&self) -> usize {
        self.ledger.len()
    }

    pub fn in_conflict_count(&self) -> usize {
        self.final_labels.iter().filter(|l| l.is_in_conflict()).count()
    }

    /// Grades of each request, in ledger order.
    pub fn grades_by_request(&self) -> Vec<Vec<LabelId>> {
        let mut out = vec![Vec::new(); self.final_labels.len()];
        for g in &self.ledger {
            if let Some(v) = out.get_mut(g.request_id as usize) {
                v.push(g.label);
            }
        }
        out
    }
}

/// Returns the label whose count is strictly greater than half the input,
/// if any.
pub fn strict_majority(labels: &[LabelId]) -> Result<Option<LabelId>> {
    if labels.is_empty() {
        return Err(invalid("strict majority of an empty multiset"));
    }
    Ok(majority_unchecked(labels))
}

// Boyer-Moore vote followed by a verification pass.
fn majority_unchecked(labels: &[LabelId]) -> Option<LabelId> {
    let mut candidate = labels[0];
    let mut count = 0usize;
    for &l in labels {
        if count == 0 {
            candidate = l;
            count = 1;
        } else if l == candidate {
            count += 1;
        } else {
            count -= 1;
        }
    }
    let support = labels.iter().filter(|&&l| l == candidate).count();
    (2 * support > labels.len()).then_some(candidate)
}

// Draws workers uniformly from a list, without replacement.
struct DistinctDraw<'a> {
    workers: &'a [Worker],
    used: Vec<usize>,
}

impl<'a> DistinctDraw<'a> {
    fn new(workers: &'a [Worker]) -> Self {
        DistinctDraw { workers, used: Vec::with_capacity(8) }
    }

    fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &'a Worker {
        debug_assert!(self.used.len() < self.workers.len());
        loop {
            let i = rng.random_range(0..self.workers.len());
            if !self.used.contains(&i) {
                self.used.push(i);
                return &self.workers[i];
            }
        }
    }
}

struct RequestGrading<'a, A, R> {
    model: &'a A,
    request: &'a Request,
    batch: &'a RequestBatch,
    rng: R,
    grades: Vec<(WorkerId, LabelId)>,
}

impl<A: AnnotationModel, R: Rng> RequestGrading<'_, A, R> {
    fn grade(&mut self, worker: &Worker) -> LabelId {
        let label = self.model.annotate(worker, self.request, self.batch.label_space(), &mut self.rng);
        self.grades.push((worker.id, label));
        label
    }

    fn labels(&self) -> Vec<LabelId> {
        self.grades.iter().map(|g| g.1).collect()
    }
}

fn grade_request<A: AnnotationModel>(
    model: &A,
    strategy: StrategyConfig,
    batch: &RequestBatch,
    pool: &WorkerPool,
    request: &Request,
    seed: &SeedSpec,
) -> (FinalLabel, Vec<(WorkerId, LabelId)>) {
    let mut g = RequestGrading {
        model,
        request,
        batch,
        rng: seed.child(request.id as u64).derive_stream(),
        grades: Vec::with_capacity(8),
    };
    let mut regulars = DistinctDraw::new(pool.regulars());

    let outcome = match strategy {
        StrategyConfig::OneGrader => {
            let w = regulars.next(&mut g.rng);
            FinalLabel::Assigned(g.grade(w))
        }
        StrategyConfig::DgCr => {
            let a = regulars.next(&mut g.rng);
            let a = g.grade(a);
            let b = regulars.next(&mut g.rng);
            let b = g.grade(b);
            if a == b {
                FinalLabel::Assigned(a)
            } else {
                let experts = pool.experts();
                let expert = &experts[g.rng.random_range(0..experts.len())];
                FinalLabel::Assigned(g.grade(expert))
            }
        }
        StrategyConfig::NGraded { n } => {
            for _ in 0..n {
                let w = regulars.next(&mut g.rng);
                g.grade(w);
            }
            majority_unchecked(&g.labels()).map_or(FinalLabel::InConflict, FinalLabel::Assigned)
        }
        StrategyConfig::Dacr { min_grades, max_grades } => {
            for _ in 0..min_grades {
                let w = regulars.next(&mut g.rng);
                g.grade(w);
            }
            loop {
                if let Some(l) = majority_unchecked(&g.labels()) {
                    break FinalLabel::Assigned(l);
                }
                if g.grades.len() >= max_grades as usize {
                    break FinalLabel::InConflict;
                }
                let w = regulars.next(&mut g.rng);
                g.grade(w);
            }
        }
    };
    (outcome, g.grades)
}

/// Runs `strategy` over every request of `batch` with a custom annotation model.
pub fn run_strategy_with<A: AnnotationModel>(
    model: &A,
    strategy: StrategyConfig,
    batch: &RequestBatch,
    pool: &WorkerPool,
    project_seed: &SeedSpec,
) -> Result<ProjectResult> {
    strategy.check_pool(pool)?;
    let per_request: Vec<_> = batch
        .requests()
        .par_iter()
        .map(|r| grade_request(model, strategy, batch, pool, r, project_seed))
        .collect();

    let mut final_labels = Vec::with_capacity(per_request.len());
    let mut ledger = Vec::with_capacity(per_request.iter().map(|p| p.1.len()).sum());
    for (request, (outcome, grades)) in batch.requests().iter().zip(per_request) {
        final_labels.push(outcome);
        ledger.extend(grades.into_iter().enumerate().map(|(i, (worker_id, label))| GradeRecord {
            request_id: request.id,
            sequence_index: i as u32,
            worker_id,
            label,
        }));
    }
    Ok(ProjectResult { strategy, final_labels, ledger })
}

/// Runs `strategy` with the uniform-noise Bernoulli annotator.
pub fn run_strategy(
    strategy: StrategyConfig,
    batch: &RequestBatch,
    pool: &WorkerPool,
    project_seed: &SeedSpec,
) -> Result<ProjectResult> {
    run_strategy_with(&UniformNoise, strategy, batch, pool, project_seed)
}

pub fn run_one_grader(batch: &RequestBatch, pool: &WorkerPool, seed: &SeedSpec) -> Result<ProjectResult> {
    run_strategy(StrategyConfig::OneGrader, batch, pool, seed)
}

pub fn run_dg_cr(batch: &RequestBatch, pool: &WorkerPool, seed: &SeedSpec) -> Result<ProjectResult> {
    run_strategy(StrategyConfig::DgCr, batch, pool, seed)
}

pub fn run_n_graded(batch: &RequestBatch, pool: &WorkerPool, n: u32, seed: &SeedSpec) -> Result<ProjectResult> {
    run_strategy(StrategyConfig::NGraded { n }, batch, pool, seed)
}

pub fn run_dacr(
    batch: &RequestBatch,
    pool: &WorkerPool,
    min_grades: u32,
    max_grades: u32,
    seed: &SeedSpec,
) -> Result<ProjectResult> {
    run_strategy(StrategyConfig::Dacr { min_grades, max_grades }, batch, pool, seed)
}
