//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are visible in the
//! normal `cargo test` output. The process exits non-zero if any criterion
//! fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use dacr::agents::{
    annotate, sample_request_batch, sample_worker_pool, uniform_wrong_label, AnnotationModel, BatchParams, PoolParams,
    Worker, WorkerId, WorkerKind,
};
use dacr::estimation::{
    bhatia_davis_bound, cohen_kappa, conflict_confusion_matrix, consistency_variance_bound, expected_consistency,
    liem_estimate, ConflictPolicy, ConsistencyMode,
};
use dacr::experiments::{
    consistency_accuracy_pairs_from, fit_power_exponent, run_study, ExperimentConfig, Retention, Study,
};
use dacr::stream::SeedSpec;
use dacr::strategies::{run_strategy, run_strategy_with, strict_majority, ProjectResult, StrategyConfig};
use dacr::{FinalLabel, LabelId, LabelSpace, Request};

const ONE: StrategyConfig = StrategyConfig::OneGrader;
const DGCR: StrategyConfig = StrategyConfig::DgCr;
const N5: StrategyConfig = StrategyConfig::NGraded { n: 5 };
const N7: StrategyConfig = StrategyConfig::NGraded { n: 7 };
const DACR: StrategyConfig = StrategyConfig::Dacr { min_grades: 2, max_grades: 5 };

struct Tally {
    failed: Vec<String>,
}

impl Tally {
    fn record(&mut self, id: &str, name: &str, passed: bool, detail: String) {
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("criterion {id} [{verdict}] {name}");
        for line in detail.lines() {
            println!("    {line}");
        }
        if !passed {
            self.failed.push(format!("{id} {name}"));
        }
    }
}

fn single_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn reference_study() -> (Study, Duration) {
    let config = ExperimentConfig::default();
    let start = Instant::now();
    let study = single_thread(|| run_study(&config, Retention { final_labels: true, projects: 2 }).unwrap());
    (study, start.elapsed())
}

fn criterion_1(t: &mut Tally, study: &Study, elapsed: Duration) {
    // (strategy, accuracy, average grades, grades must be exact)
    let targets = [
        (ONE, 0.809, 10_000.0, true),
        (DGCR, 0.940, 23_382.0, false),
        (N5, 0.934, 50_000.0, true),
        (N7, 0.954, 70_000.0, true),
        (DACR, 0.949, 25_495.0, false),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (strategy, acc, grades, exact) in targets {
        let report = study.report.strategy(strategy).unwrap();
        let stats = report.stats();
        let acc_ok = within(stats.mean_accuracy, acc, 0.015);
        let grades_ok = if exact {
            report.replications.iter().all(|r| r.total_grades as f64 == grades)
        } else {
            within(stats.average_grades, grades, 0.03 * grades)
        };
        ok &= acc_ok && grades_ok;
        detail += &format!(
            "{:<12} accuracy {:.4} (target {acc:.3} +/- 0.015) {}  grades {:.1} (target {grades}{}) {}  var {:.3e}\n",
            strategy.to_string(),
            stats.mean_accuracy,
            if acc_ok { "ok" } else { "MISS" },
            stats.average_grades,
            if exact { ", exact" } else { " +/- 3%" },
            if grades_ok { "ok" } else { "MISS" },
            stats.accuracy_variance,
        );
    }
    let time_ok = elapsed < Duration::from_secs(300);
    ok &= time_ok;
    detail += &format!("single-threaded runtime {:.1}s (limit 300s)", elapsed.as_secs_f64());
    t.record("1", "reference strategy comparison (accuracy, grades, runtime)", ok, detail);

    // Headline ordering implied by the comparison: DACR beats the fixed-budget
    // strategies it undercuts, at a fraction of the seven-grader cost.
    let stats = |s| study.report.strategy(s).unwrap().stats();
    let dacr = stats(DACR);
    let dominance = dacr.mean_accuracy > stats(DGCR).mean_accuracy
        && dacr.mean_accuracy > stats(N5).mean_accuracy
        && dacr.average_grades < 0.37 * stats(N7).average_grades
        && stats(ONE).mean_accuracy < stats(N5).mean_accuracy;
    t.record(
        "1a",
        "strategy ordering (DACR > DG-CR, N=5; DACR grades < 0.37 x N=7)",
        dominance,
        format!("DACR/N=7 grade ratio {:.3}", dacr.average_grades / stats(N7).average_grades),
    );

    // Replication-to-replication variance, compared to the published column
    // only up to an order of magnitude.
    let published = [(ONE, 1.47e-5), (DGCR, 4.65e-6), (N5, 1.92e-4), (N7, 7.12e-5), (DACR, 3.74e-6)];
    let mut ok = true;
    let mut detail = String::new();
    for (strategy, target) in published {
        let var = stats(strategy).accuracy_variance;
        let ratio = var / target;
        let fine = (0.1..=10.0).contains(&ratio);
        ok &= fine;
        detail += &format!("{:<12} variance {var:.3e} vs {target:.2e} (ratio {ratio:.2})\n", strategy.to_string());
    }
    t.record("1b", "accuracy variance within an order of magnitude", ok, detail.trim_end().to_string());
}

fn criterion_2(t: &mut Tally, study: &Study) {
    let stats = study.report.strategy(DACR).unwrap().stats();
    let rate_ok = within(stats.in_conflict_rate, 0.051, 0.010);
    let gpr_ok = within(stats.grades_per_request, 2.55, 0.08);
    t.record(
        "2",
        "DACR(2,5) in-conflict rate and grades per request",
        rate_ok && gpr_ok,
        format!(
            "in-conflict rate {:.4} (target 0.051 +/- 0.010)\ngrades per request {:.4} (target 2.55 +/- 0.08)",
            stats.in_conflict_rate, stats.grades_per_request
        ),
    );
}

fn criterion_3(t: &mut Tally, study: &Study) {
    let pairs = consistency_accuracy_pairs_from(study).unwrap();
    let max_dev = pairs.iter().map(|p| (p.y_hat.sqrt() - p.mean_accuracy).abs()).fold(0.0, f64::max);
    let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.y_hat, p.mean_accuracy)).collect();
    let beta = fit_power_exponent(&points).unwrap();
    let ok = max_dev <= 0.03 && (0.45..=0.55).contains(&beta);
    t.record(
        "3",
        "latent accuracy from duplicate-project consistency",
        ok,
        format!(
            "{} same-strategy pairs; max |sqrt(Y) - mean accuracy| = {max_dev:.4} (limit 0.03)\nfitted exponent {beta:.4} (range [0.45, 0.55])",
            pairs.len()
        ),
    );
}

/// Sample variance of the consistency of duplicate projects.
///
/// The annotation process (strategy plus worker pool) is held fixed; every
/// pair gets a fresh batch and fresh project streams.
fn duplicate_pair_variance(strategy: StrategyConfig, n: usize, pairs: u64) -> f64 {
    let batch_params = BatchParams { requests: n as u32, ..BatchParams::default() };
    let key = u64::from(strategy.to_string().bytes().fold(0u32, |h, b| h.wrapping_mul(31).wrapping_add(u32::from(b))));
    let pool = sample_worker_pool(&PoolParams::default(), &mut SeedSpec::new(4).child(key).derive_stream()).unwrap();
    let ys: Vec<f64> = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let root = SeedSpec::new(4).child(key).child(n as u64).child(k);
            let batch = sample_request_batch(&batch_params, &mut root.child(0).derive_stream()).unwrap();
            let project = |side: u64| {
                run_strategy(strategy, &batch, &pool, &root.child(2).child(side)).unwrap()
            };
            let (a, b) = (project(0), project(1));
            liem_estimate(&a.final_labels, &b.final_labels, ConflictPolicy::PairMismatch).unwrap().y_hat
        })
        .collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (ys.len() - 1) as f64
}

fn criterion_4(t: &mut Tally) {
    let mut ok = true;
    let mut detail = String::new();
    for n in [100usize, 1_000, 10_000] {
        let bound = 33.0 / (64.0 * n as f64);
        for strategy in [ONE, DACR] {
            let var = duplicate_pair_variance(strategy, n, 400);
            ok &= var <= bound;
            detail += &format!("n={n:<6} {:<11} Var[Y] {var:.3e} <= {bound:.3e}: {}\n", strategy.to_string(), var <= bound);
        }
    }
    let bd = bhatia_davis_bound(0.5, 1.0, 0.0).unwrap();
    let b100 = consistency_variance_bound(100).unwrap();
    ok &= bd == 0.25 && within(b100, 5.156e-3, 1e-6);
    detail += &format!("bhatia_davis_bound(0.5, 1, 0) = {bd}\nconsistency_variance_bound(100) = {b100:.7e}");
    t.record("4", "consistency variance bound", ok, detail);
}

fn criterion_5(t: &mut Tally) {
    const TRIALS: u64 = 10_000_000;
    const CHUNKS: u64 = 100;
    let levels = [0.0, 0.5, 0.8, 0.9, 1.0];
    let mut cells = Vec::new();
    for m in [2u32, 11, 60] {
        for p in levels {
            for q in levels {
                cells.push((m, p, q));
            }
        }
    }
    let tasks: Vec<(usize, u64)> = (0..cells.len()).flat_map(|c| (0..CHUNKS).map(move |k| (c, k))).collect();
    let counts: Vec<(usize, u64)> = tasks
        .par_iter()
        .map(|&(c, k)| {
            let (m, p, q) = cells[c];
            let space = LabelSpace::new(m).unwrap();
            let a = Worker { id: WorkerId(0), capability: p, kind: WorkerKind::Regular };
            let b = Worker { id: WorkerId(1), capability: q, kind: WorkerKind::Regular };
            let mut rng = SeedSpec::new(5).child(c as u64).child(k).derive_stream();
            let mut same = 0u64;
            for _ in 0..TRIALS / CHUNKS {
                let truth = LabelId(rng.random_range(0..m));
                let request = Request::new(0, truth, 1.0, space).unwrap();
                same += u64::from(annotate(&a, &request, space, &mut rng) == annotate(&b, &request, space, &mut rng));
            }
            (c, same)
        })
        .collect();
    let mut totals = vec![0u64; cells.len()];
    for (c, s) in counts {
        totals[c] += s;
    }
    let mut worst = (0.0f64, cells[0]);
    for (c, &(m, p, q)) in cells.iter().enumerate() {
        let mc = totals[c] as f64 / TRIALS as f64;
        let exact = expected_consistency(p, q, m, ConsistencyMode::Exact).unwrap();
        let dev = (mc - exact).abs();
        if dev > worst.0 {
            worst = (dev, (m, p, q));
        }
    }
    let (dev, (m, p, q)) = worst;
    t.record(
        "5",
        "expected consistency formula vs Monte Carlo",
        dev <= 0.0005,
        format!(
            "{} cells x {TRIALS} trials; worst |MC - formula| = {dev:.2e} at m={m}, p={p}, q={q} (limit 5e-4)",
            cells.len()
        ),
    );
}

// ---- criterion 6: property suites ----

fn brute_majority(labels: &[LabelId]) -> Option<LabelId> {
    let mut counts: HashMap<LabelId, usize> = HashMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1;
    }
    counts.into_iter().find(|&(_, c)| 2 * c > labels.len()).map(|(l, _)| l)
}

fn majority_soundness() -> Result<(), String> {
    let mut rng = SeedSpec::new(61).derive_stream();
    for _ in 0..200_000 {
        let len = rng.random_range(1..10);
        let alphabet = rng.random_range(1..5);
        let labels: Vec<LabelId> = (0..len).map(|_| LabelId(rng.random_range(0..alphabet))).collect();
        if strict_majority(&labels).unwrap() != brute_majority(&labels) {
            return Err(format!("disagrees with brute force on {labels:?}"));
        }
    }
    if strict_majority(&[]).is_ok() {
        return Err("empty input accepted".into());
    }
    Ok(())
}

fn grade_accounting(project: &ProjectResult) -> Result<(), String> {
    let grades = project.grades_by_request();
    if grades.iter().map(Vec::len).sum::<usize>() != project.ledger.len() {
        return Err("ledger length differs from per-request grade total".into());
    }
    let mut workers: Vec<Vec<WorkerId>> = vec![Vec::new(); grades.len()];
    for rec in &project.ledger {
        let w = &mut workers[rec.request_id as usize];
        if rec.sequence_index as usize != w.len() || w.contains(&rec.worker_id) {
            return Err(format!("request {}: bad sequence or repeated worker", rec.request_id));
        }
        w.push(rec.worker_id);
    }
    for (id, (g, fin)) in grades.iter().zip(&project.final_labels).enumerate() {
        let k = g.len();
        let expected_final = match brute_majority(g) {
            Some(l) => FinalLabel::Assigned(l),
            None => FinalLabel::InConflict,
        };
        let shape_ok = match project.strategy {
            StrategyConfig::OneGrader => k == 1 && *fin == FinalLabel::Assigned(g[0]),
            StrategyConfig::DgCr => {
                let regular = |w: WorkerId| w.0 < PoolParams::default().regular_count;
                let w = &workers[id];
                (k == 2 && g[0] == g[1] && *fin == FinalLabel::Assigned(g[0]) && regular(w[0]) && regular(w[1]))
                    || (k == 3 && g[0] != g[1] && *fin == FinalLabel::Assigned(g[2]) && !regular(w[2]))
            }
            StrategyConfig::NGraded { n } => k == n as usize && *fin == expected_final,
            StrategyConfig::Dacr { min_grades, max_grades } => {
                let (lo, hi) = (min_grades as usize, max_grades as usize);
                let stopped_first = (lo..k).all(|j| brute_majority(&g[..j]).is_none());
                (lo..=hi).contains(&k)
                    && stopped_first
                    && (k == hi || brute_majority(g).is_some())
                    && *fin == expected_final
            }
        };
        if !shape_ok {
            return Err(format!("{}: request {id} violates the stopping rule: {g:?} -> {fin}", project.strategy));
        }
    }
    Ok(())
}

fn annotate_chi_square() -> Result<(), String> {
    let space = LabelSpace::new(11).unwrap();
    let truth = LabelId(4);
    let request = Request::new(0, truth, 0.9, space).unwrap();
    let mut rng = SeedSpec::new(62).derive_stream();

    // Incapable worker: every answer is wrong and uniform over the other 10.
    let zero = Worker { id: WorkerId(0), capability: 0.0, kind: WorkerKind::Regular };
    let trials = 1_000_000u64;
    let mut counts = [0u64; 11];
    for _ in 0..trials {
        counts[annotate(&zero, &request, space, &mut rng).index()] += 1;
    }
    if counts[truth.index()] != 0 {
        return Err("incapable worker returned the ground truth".into());
    }
    let expected = trials as f64 / 10.0;
    let stat: f64 = counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != truth.index())
        .map(|(_, &c)| (c as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new(9.0).unwrap().inverse_cdf(0.999);
    if stat > critical {
        return Err(format!("uniform-wrong chi-square {stat:.2} > {critical:.2}"));
    }

    // Bernoulli correctness at c * d = 0.72.
    let worker = Worker { id: WorkerId(1), capability: 0.8, kind: WorkerKind::Regular };
    let correct = (0..trials).filter(|_| annotate(&worker, &request, space, &mut rng) == truth).count();
    let p = 0.72;
    let z = (correct as f64 - p * trials as f64) / (trials as f64 * p * (1.0 - p)).sqrt();
    if z.abs() > 4.0 {
        return Err(format!("correct-rate z-score {z:.2}"));
    }
    Ok(())
}

/// Wrong answers gravitate to the confusable pair {0, 1}.
struct PlantedPair;

impl AnnotationModel for PlantedPair {
    fn annotate<R: Rng + ?Sized>(&self, worker: &Worker, request: &Request, space: LabelSpace, rng: &mut R) -> LabelId {
        if rng.random::<f64>() < worker.capability * request.difficulty {
            return request.ground_truth;
        }
        if rng.random::<f64>() < 0.8 {
            match request.ground_truth.0 {
                t @ (0 | 1) => LabelId(1 - t),
                _ => LabelId(rng.random_range(0..2)),
            }
        } else {
            uniform_wrong_label(request.ground_truth, space, rng)
        }
    }
}

fn confusion_properties(study: &Study) -> Result<(), String> {
    let space = study.batch.as_ref().unwrap().label_space();
    for project in study.projects.iter().flatten() {
        let cm = conflict_confusion_matrix(project, space).map_err(|e| e.to_string())?;
        let m = cm.size();
        for i in 0..m {
            if cm.raw(i, i) != 0 || cm.normalized(i, i) != 0.0 {
                return Err(format!("{}: non-zero diagonal at {i}", project.strategy));
            }
            for j in 0..m {
                if cm.raw(i, j) != cm.raw(j, i) || cm.normalized(i, j) != cm.normalized(j, i) {
                    return Err(format!("{}: asymmetric at ({i}, {j})", project.strategy));
                }
            }
        }
        if project.strategy == DGCR && !cm.is_zero() {
            return Err("DG-CR never ends in conflict but produced a non-zero matrix".into());
        }
    }

    let bp = BatchParams { requests: 20_000, labels: 12, ..BatchParams::default() };
    let batch = sample_request_batch(&bp, &mut SeedSpec::new(63).derive_stream()).unwrap();
    let pool = sample_worker_pool(&PoolParams::default(), &mut SeedSpec::new(64).derive_stream()).unwrap();
    let planted = run_strategy_with(&PlantedPair, DACR, &batch, &pool, &SeedSpec::new(65)).unwrap();
    let cm = conflict_confusion_matrix(&planted, batch.label_space()).unwrap();
    match cm.max_normalized_cell() {
        Some((0, 1)) => Ok(()),
        other => Err(format!("planted pair (0, 1) not recovered; maximum at {other:?}")),
    }
}

fn determinism() -> Result<(), String> {
    let config = ExperimentConfig {
        batch: BatchParams { requests: 1_000, ..BatchParams::default() },
        replications: 12,
        master_seed: 66,
        ..ExperimentConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_study(&config, Retention { final_labels: true, projects: 0 }).unwrap())
    };
    let (a, b, c) = (run(1), run(4), run(4));
    if a.report != b.report || a.final_labels != b.final_labels {
        return Err("1-thread and 4-thread runs differ".into());
    }
    if b.report != c.report || b.final_labels != c.final_labels {
        return Err("repeated 4-thread runs differ".into());
    }
    let mut reversed = config.clone();
    reversed.strategies.reverse();
    let d = run_study(&reversed, Retention::default()).unwrap();
    for s in &a.report.strategies {
        if d.report.strategy(s.strategy) != Some(s) {
            return Err(format!("{}: result depends on strategy order", s.strategy));
        }
    }
    Ok(())
}

fn kappa_identities() -> Result<(), String> {
    let a = |v: &[u32]| v.iter().map(|&l| FinalLabel::Assigned(LabelId(l))).collect::<Vec<_>>();
    let space = LabelSpace::new(2).unwrap();
    let k = cohen_kappa(&a(&[0, 0, 1, 1]), &a(&[0, 1, 0, 1]), space).unwrap();
    if (k.pr_a, k.pr_e, k.kappa) != (0.5, 0.5, 0.0) {
        return Err(format!("hand example gave {k:?}"));
    }
    if cohen_kappa(&a(&[0, 0, 0]), &a(&[0, 0, 0]), space).is_ok() {
        return Err("kappa defined for constant identical raters".into());
    }

    let space = LabelSpace::new(7).unwrap();
    let mut rng = SeedSpec::new(67).derive_stream();
    for _ in 0..500 {
        let n = rng.random_range(2..200);
        let draw = |rng: &mut dacr::stream::Stream| -> FinalLabel {
            if rng.random::<f64>() < 0.1 {
                FinalLabel::InConflict
            } else {
                FinalLabel::Assigned(LabelId(rng.random_range(0..7)))
            }
        };
        let x: Vec<FinalLabel> = (0..n).map(|_| draw(&mut rng)).collect();
        let y: Vec<FinalLabel> = (0..n).map(|_| draw(&mut rng)).collect();

        // Independent oracle: categories are the 7 labels plus "in conflict".
        let cat = |f: &FinalLabel| f.label().map_or(7, |l| l.index());
        let (mut cx, mut cy) = ([0f64; 8], [0f64; 8]);
        let mut agree = 0.0;
        for (p, q) in x.iter().zip(&y) {
            cx[cat(p)] += 1.0;
            cy[cat(q)] += 1.0;
            agree += f64::from(u8::from(cat(p) == cat(q)));
        }
        let nf = n as f64;
        let pr_a = agree / nf;
        let pr_e: f64 = cx.iter().zip(&cy).map(|(a, b)| a * b / (nf * nf)).sum();

        match (cohen_kappa(&x, &y, space), cohen_kappa(&y, &x, space)) {
            (Ok(k), Ok(k2)) => {
                let oracle = (pr_a - pr_e) / (1.0 - pr_e);
                if (k.kappa - oracle).abs() > 1e-12 || (k.kappa - k2.kappa).abs() > 1e-12 || k.kappa > 1.0 + 1e-12 {
                    return Err(format!("kappa {} vs oracle {oracle}", k.kappa));
                }
            }
            (Err(_), Err(_)) if pr_e >= 1.0 => {}
            other => return Err(format!("unexpected kappa outcome {other:?}")),
        }
        match cohen_kappa(&x, &x, space) {
            Ok(k) if (k.kappa - 1.0).abs() <= 1e-12 => {}
            Err(_) if x.iter().all(|l| cat(l) == cat(&x[0])) => {}
            other => return Err(format!("self-agreement gave {other:?}")),
        }
    }
    Ok(())
}

fn criterion_6(t: &mut Tally, study: &Study) {
    let accounting = || -> Result<(), String> {
        for project in study.projects.iter().flatten() {
            grade_accounting(project)?;
        }
        Ok(())
    };
    type Suite<'a> = Box<dyn Fn() -> Result<(), String> + 'a>;
    let suites: [(&str, Suite); 6] = [
        ("strict-majority soundness", Box::new(majority_soundness)),
        ("grade accounting", Box::new(accounting)),
        ("annotate chi-square", Box::new(annotate_chi_square)),
        ("confusion matrix symmetry / diagonal / planted pair", Box::new(|| confusion_properties(study))),
        ("determinism and scheduling independence", Box::new(determinism)),
        ("kappa identities", Box::new(kappa_identities)),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, suite) in suites {
        match suite() {
            Ok(()) => detail += &format!("{name}: ok\n"),
            Err(e) => {
                ok = false;
                detail += &format!("{name}: FAILED: {e}\n");
            }
        }
    }
    t.record("6", "property suites", ok, detail.trim_end().to_string());
}

fn criterion_7(t: &mut Tally) {
    t.record(
        "7",
        "excluded: live-deployment statistics",
        true,
        "The production project's 3.74 grades per request, 5.00% in-conflict rate and its\n\
         observed confusion pattern come from human annotators and cannot be simulated;\n\
         criteria 2 and 6 cover the synthetic analogs."
            .to_string(),
    );
}

fn main() {
    let mut t = Tally { failed: Vec::new() };
    let (study, elapsed) = reference_study();
    criterion_1(&mut t, &study, elapsed);
    criterion_2(&mut t, &study);
    criterion_3(&mut t, &study);
    criterion_4(&mut t);
    criterion_5(&mut t);
    criterion_6(&mut t, &study);
    criterion_7(&mut t);

    if t.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: {} failed: {}", t.failed.len(), t.failed.join("; "));
        std::process::exit(1);
    }
}
