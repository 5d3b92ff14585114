//! Replicated simulation studies and their aggregate metrics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{sample_request_batch, sample_worker_pool, BatchParams, PoolParams, RequestBatch, WorkerPool};
use crate::error::{invalid, Error, Result};
use crate::estimation::{liem_estimate, ConflictPolicy};
use crate::labels::FinalLabel;
use crate::stream::{tags, SeedSpec};
use crate::strategies::{run_strategy, ProjectResult, StrategyConfig};

/// How in-conflict answers count in accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccuracyPolicy {
    #[default]
    Incorrect,
    /// Drop in-conflict requests from the denominator.
    Exclude,
}

impl fmt::Display for AccuracyPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccuracyPolicy::Incorrect => "incorrect",
            AccuracyPolicy::Exclude => "exclude",
        })
    }
}

impl FromStr for AccuracyPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "incorrect" => Ok(AccuracyPolicy::Incorrect),
            "exclude" => Ok(AccuracyPolicy::Exclude),
            other => Err(invalid(format!("unknown accuracy policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub batch: BatchParams,
    pub pool: PoolParams,
    pub strategies: Vec<StrategyConfig>,
    pub replications: u32,
    /// All replications and strategies share one request batch.
    pub fixed_batch: bool,
    /// Draw a fresh worker pool for every project instead of one shared pool.
    pub resample_pools: bool,
    pub accuracy_policy: AccuracyPolicy,
    pub conflict_policy: ConflictPolicy,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            master_seed: 1,
            batch: BatchParams::default(),
            pool: PoolParams::default(),
            strategies: StrategyConfig::reference_set(),
            replications: 100,
            fixed_batch: true,
            resample_pools: true,
            accuracy_policy: AccuracyPolicy::Incorrect,
            conflict_policy: ConflictPolicy::PairMismatch,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(invalid("replications must be >= 1"));
        }
        if self.strategies.is_empty() {
            return Err(invalid("no strategies configured"));
        }
        self.batch.validate()?;
        self.pool.validate()?;
        for (i, s) in self.strategies.iter().enumerate() {
            s.validate()?;
            if self.strategies[..i].contains(s) {
                return Err(invalid(format!("strategy {s} listed twice")));
            }
        }
        Ok(())
    }
}

// Stable per-strategy stream component, independent of list order.
fn strategy_key(strategy: &StrategyConfig) -> u64 {
    strategy.to_string().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

fn batch_seed(config: &ExperimentConfig, replication: u32) -> SeedSpec {
    let s = SeedSpec::new(config.master_seed).child(tags::BATCH);
    if config.fixed_batch {
        s
    } else {
        s.child(u64::from(replication))
    }
}

/// Fraction of requests whose final label equals the ground truth.
pub fn project_accuracy(project: &ProjectResult, batch: &RequestBatch, policy: AccuracyPolicy) -> Result<f64> {
    if project.final_labels.len() != batch.len() {
        return Err(invalid(format!(
            "project covers {} requests, batch has {}",
            project.final_labels.len(),
            batch.len()
        )));
    }
    let (mut correct, mut counted) = (0usize, 0usize);
    for (label, request) in project.final_labels.iter().zip(batch.requests()) {
        if label.is_in_conflict() && policy == AccuracyPolicy::Exclude {
            continue;
        }
        counted += 1;
        correct += usize::from(label.is_correct(request.ground_truth));
    }
    if counted == 0 {
        return Err(Error::EmptySample("every request is in conflict".into()));
    }
    Ok(correct as f64 / counted as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub replication: u32,
    pub accuracy: f64,
    pub total_grades: u64,
    pub in_conflict: u64,
    pub requests: u64,
}

impl ReplicationSummary {
    pub fn in_conflict_rate(&self) -> f64 {
        self.in_conflict as f64 / self.requests as f64
    }
}

/// Per-strategy results. All statistics are computed from `replications`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub strategy: StrategyConfig,
    pub replications: Vec<ReplicationSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub mean_accuracy: f64,
    /// Unbiased sample variance of the accuracies; 0 for one replication.
    pub accuracy_variance: f64,
    pub average_grades: f64,
    pub grades_per_request: f64,
    pub in_conflict_rate: f64,
}

impl StrategyReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.replications.iter().map(|r| r.accuracy).collect()
    }

    pub fn stats(&self) -> StrategyStats {
        let k = self.replications.len() as f64;
        let mean = self.replications.iter().map(|r| r.accuracy).sum::<f64>() / k;
        let variance = if self.replications.len() > 1 {
            self.replications.iter().map(|r| (r.accuracy - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let grades: u64 = self.replications.iter().map(|r| r.total_grades).sum();
        let requests: u64 = self.replications.iter().map(|r| r.requests).sum();
        let in_conflict: u64 = self.replications.iter().map(|r| r.in_conflict).sum();
        StrategyStats {
            mean_accuracy: mean,
            accuracy_variance: variance,
            average_grades: grades as f64 / k,
            grades_per_request: grades as f64 / requests as f64,
            in_conflict_rate: in_conflict as f64 / requests as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub accuracy_policy: AccuracyPolicy,
    pub strategies: Vec<StrategyReport>,
}

impl ExperimentReport {
    pub fn strategy(&self, strategy: StrategyConfig) -> Option<&StrategyReport> {
        self.strategies.iter().find(|s| s.strategy == strategy)
    }
}

/// What [`run_study`] keeps beyond the report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Retention {
    /// Keep every project's final labels (needed for consistency pairs).
    pub final_labels: bool,
    /// Keep the first `projects` full results (with ledgers) per strategy.
    pub projects: u32,
}

/// Report plus whatever was retained. Indexing is `[strategy][replication]`.
#[derive(Debug, Clone)]
pub struct Study {
    pub config: ExperimentConfig,
    pub report: ExperimentReport,
    /// The shared batch when `fixed_batch` is set.
    pub batch: Option<RequestBatch>,
    pub final_labels: Vec<Vec<Vec<FinalLabel>>>,
    pub projects: Vec<Vec<ProjectResult>>,
}

struct Outcome {
    summary: ReplicationSummary,
    labels: Option<Vec<FinalLabel>>,
    project: Option<ProjectResult>,
}

/// Runs every configured strategy `replications` times.
///
/// Each project derives its streams from `(master_seed, strategy, replication)`,
/// so the result does not depend on how many threads the ambient rayon pool has.
pub fn run_study(config: &ExperimentConfig, retain: Retention) -> Result<Study> {
    config.validate()?;

    let fixed_batch = if config.fixed_batch {
        Some(sample_request_batch(&config.batch, &mut batch_seed(config, 0).derive_stream())?)
    } else {
        None
    };
    let shared_pool = if config.resample_pools {
        None
    } else {
        Some(sample_worker_pool(&config.pool, &mut SeedSpec::new(config.master_seed).child(tags::POOL).derive_stream())?)
    };

    let tasks: Vec<(usize, u32)> = (0..config.strategies.len())
        .flat_map(|s| (0..config.replications).map(move |r| (s, r)))
        .collect();

    let outcomes: Vec<Outcome> = tasks
        .par_iter()
        .map(|&(s, rep)| -> Result<Outcome> {
            let strategy = config.strategies[s];
            let key = strategy_key(&strategy);
            let owned_batch;
            let batch = match &fixed_batch {
                Some(b) => b,
                None => {
                    owned_batch = sample_request_batch(&config.batch, &mut batch_seed(config, rep).derive_stream())?;
                    &owned_batch
                }
            };
            let owned_pool: WorkerPool;
            let pool = match &shared_pool {
                Some(p) => p,
                None => {
                    let seed = SeedSpec::new(config.master_seed).child(tags::POOL).child(key).child(u64::from(rep));
                    owned_pool = sample_worker_pool(&config.pool, &mut seed.derive_stream())?;
                    &owned_pool
                }
            };
            let project_seed = SeedSpec::new(config.master_seed).child(tags::PROJECT).child(key).child(u64::from(rep));
            let project = run_strategy(strategy, batch, pool, &project_seed)?;
            let summary = ReplicationSummary {
                replication: rep,
                accuracy: project_accuracy(&project, batch, config.accuracy_policy)?,
                total_grades: project.total_grades() as u64,
                in_conflict: project.in_conflict_count() as u64,
                requests: batch.len() as u64,
            };
            let labels = retain.final_labels.then(|| project.final_labels.clone());
            let project = (rep < retain.projects).then_some(project);
            Ok(Outcome { summary, labels, project })
        })
        .collect::<Result<_>>()?;

    let reps = config.replications as usize;
    let mut strategies = Vec::with_capacity(config.strategies.len());
    let mut final_labels = Vec::new();
    let mut projects = Vec::new();
    let mut it = outcomes.into_iter();
    for &strategy in &config.strategies {
        let chunk: Vec<Outcome> = it.by_ref().take(reps).collect();
        let mut labels = Vec::new();
        let mut kept = Vec::new();
        let mut summaries = Vec::with_capacity(reps);
        for o in chunk {
            summaries.push(o.summary);
            labels.extend(o.labels);
            kept.extend(o.project);
        }
        strategies.push(StrategyReport { strategy, replications: summaries });
        if retain.final_labels {
            final_labels.push(labels);
        }
        projects.push(kept);
    }

    Ok(Study {
        config: config.clone(),
        report: ExperimentReport { accuracy_policy: config.accuracy_policy, strategies },
        batch: fixed_batch,
        final_labels,
        projects,
    })
}

pub fn run_replications(config: &ExperimentConfig) -> Result<ExperimentReport> {
    Ok(run_study(config, Retention::default())?.report)
}

/// Consistency of two same-strategy projects against their mean accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyAccuracyPair {
    pub strategy: StrategyConfig,
    pub replication_a: u32,
    pub replication_b: u32,
    pub y_hat: f64,
    pub mean_accuracy: f64,
}

/// Every unordered pair of same-strategy replications in a study that kept
/// its final labels.
pub fn consistency_accuracy_pairs_from(study: &Study) -> Result<Vec<ConsistencyAccuracyPair>> {
    if !study.config.fixed_batch {
        return Err(invalid("consistency pairs need a fixed batch shared by all projects"));
    }
    if study.config.replications < 2 {
        return Err(invalid("consistency pairs need at least 2 replications"));
    }
    if study.final_labels.len() != study.report.strategies.len() {
        return Err(invalid("study did not retain final labels"));
    }
    let mut out = Vec::new();
    for (report, labels) in study.report.strategies.iter().zip(&study.final_labels) {
        let index: Vec<(usize, usize)> =
            (0..labels.len()).flat_map(|i| (i + 1..labels.len()).map(move |j| (i, j))).collect();
        let pairs: Vec<ConsistencyAccuracyPair> = index
            .par_iter()
            .map(|&(i, j)| -> Result<_> {
                let est = liem_estimate(&labels[i], &labels[j], study.config.conflict_policy)?;
                Ok(ConsistencyAccuracyPair {
                    strategy: report.strategy,
                    replication_a: i as u32,
                    replication_b: j as u32,
                    y_hat: est.y_hat,
                    mean_accuracy: 0.5 * (report.replications[i].accuracy + report.replications[j].accuracy),
                })
            })
            .collect::<Result<_>>()?;
        out.extend(pairs);
    }
    Ok(out)
}

pub fn consistency_accuracy_pairs(config: &ExperimentConfig) -> Result<Vec<ConsistencyAccuracyPair>> {
    if config.replications < 2 {
        return Err(invalid("consistency pairs need at least 2 replications"));
    }
    let study = run_study(config, Retention { final_labels: true, projects: 0 })?;
    consistency_accuracy_pairs_from(&study)
}

/// Least-squares exponent `beta` for `accuracy = y_hat^beta`.
///
/// Gauss-Newton on the residuals `accuracy - y^beta`, started from the
/// log-log slope through the origin.
pub fn fit_power_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.iter().any(|&(y, a)| !(y > 0.0 && y <= 1.0) || !(0.0..=1.0).contains(&a)) {
        return Err(invalid("power fit needs consistency in (0, 1] and accuracy in [0, 1]"));
    }
    let (sxy, sxx) = points
        .iter()
        .filter(|&&(_, a)| a > 0.0)
        .fold((0.0, 0.0), |(sxy, sxx), &(y, a)| (sxy + y.ln() * a.ln(), sxx + y.ln() * y.ln()));
    if sxx == 0.0 {
        return Err(Error::EmptySample("power fit needs at least one consistency below 1".into()));
    }
    let mut beta = sxy / sxx;
    for _ in 0..100 {
        let (mut jr, mut jj) = (0.0, 0.0);
        for &(y, a) in points {
            let yb = y.powf(beta);
            let j = -yb * y.ln();
            jr += j * (a - yb);
            jj += j * j;
        }
        if jj == 0.0 {
            break;
        }
        let step = jr / jj;
        beta -= step;
        if step.abs() < 1e-13 {
            break;
        }
    }
    Ok(beta)
}
