//! Command-line front end.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{config_hash, parse_config};
use crate::estimation::{confusion_from_parts, liem_estimate, ConflictPolicy, LiemEstimate};
use crate::experiments::{
    consistency_accuracy_pairs_from, fit_power_exponent, run_study, ExperimentConfig, Retention, StrategyReport,
    StrategyStats,
};
use crate::io::{self as files, Provenance};
use crate::labels::LabelSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Delimited text.
    Csv,
    /// JSON.
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "dacr", version, about = "Annotation strategy simulator and consistency-based accuracy estimator")]
pub struct Cli {
    /// Experiment configuration document.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Output directory, created if absent.
    #[arg(long, global = true, value_name = "DIR", default_value = "dacr-out")]
    pub out: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Replace existing output files.
    #[arg(long, global = true)]
    pub overwrite: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every configured strategy and write the summary, per-replication
    /// accuracies and consistency pairs.
    Simulate {
        /// Also write final labels and ledgers for the first K replications of each strategy.
        #[arg(long, value_name = "K", default_value_t = 1)]
        dump_projects: u32,
    },
    /// Estimate latent accuracy from two duplicate-project final-label files.
    LiemAudit {
        labels_a: PathBuf,
        labels_b: PathBuf,
        /// How in-conflict answers are counted: pair-mismatch or exclude.
        #[arg(long)]
        policy: Option<String>,
    },
    /// Disagreement confusion matrix over the in-conflict requests of one project.
    Confusion {
        #[arg(long = "final", value_name = "PATH")]
        final_labels: PathBuf,
        #[arg(long, value_name = "PATH")]
        ledger: PathBuf,
        /// Label count (default: the configured one).
        #[arg(long, value_name = "M")]
        labels: Option<u32>,
    },
    /// Rebuild the summary table from a replication-accuracies file.
    Report {
        input: PathBuf,
    },
}

struct Output {
    dir: PathBuf,
    overwrite: bool,
    prov: Provenance,
    written: Vec<PathBuf>,
}

impl Output {
    /// Refuses to start if any target exists and overwriting is off.
    fn prepare(dir: &Path, overwrite: bool, prov: Provenance, names: &[String]) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        if !overwrite {
            if let Some(existing) = names.iter().map(|n| dir.join(n)).find(|p| p.exists()) {
                bail!("{} exists; pass --overwrite to replace it", existing.display());
            }
        }
        Ok(Output { dir: dir.to_path_buf(), overwrite, prov, written: Vec::new() })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>, &Provenance) -> files::FileResult<()>) -> Result<()> {
        let path = self.dir.join(name);
        if !self.overwrite && path.exists() {
            bail!("{} exists; pass --overwrite to replace it", path.display());
        }
        let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        f(&mut w, &self.prov).with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    Ok(cfg)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

#[derive(Serialize)]
struct StrategyView<'a> {
    strategy: String,
    stats: StrategyStats,
    replications: &'a [crate::experiments::ReplicationSummary],
}

fn report_view(strategies: &[StrategyReport]) -> Vec<StrategyView<'_>> {
    strategies
        .iter()
        .map(|s| StrategyView { strategy: s.strategy.to_string(), stats: s.stats(), replications: &s.replications })
        .collect()
}

#[derive(Serialize)]
struct PairView {
    strategy: String,
    y_hat: f64,
    mean_accuracy: f64,
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Structured => "json",
    }
}

fn simulate(cli: &Cli, dump_projects: u32) -> Result<Vec<PathBuf>> {
    let cfg = load_config(cli)?;
    let prov = Provenance { config_hash: config_hash(&cfg), master_seed: cfg.master_seed };
    let e = ext(cli.format);
    let dump = dump_projects.min(cfg.replications);

    let mut names = vec![
        "report-summary.txt".to_string(),
        format!("replication-accuracies.{e}"),
        format!("batch.{e}"),
    ];
    let with_pairs = cfg.fixed_batch && cfg.replications >= 2;
    if with_pairs {
        names.push(format!("consistency-pairs.{e}"));
    }
    for s in &cfg.strategies {
        for r in 0..dump {
            names.push(format!("final-labels.{s}.r{r}.{e}"));
            names.push(format!("ledger.{s}.r{r}.{e}"));
        }
    }
    let mut out = Output::prepare(&cli.out, cli.overwrite, prov, &names)?;

    let study = run_study(&cfg, Retention { final_labels: with_pairs, projects: dump })?;
    let pairs = if with_pairs { consistency_accuracy_pairs_from(&study)? } else { Vec::new() };

    let note = if pairs.is_empty() {
        None
    } else {
        let worst = pairs.iter().map(|p| (p.y_hat.sqrt() - p.mean_accuracy).abs()).fold(0.0, f64::max);
        let points: Vec<(f64, f64)> = pairs.iter().map(|p| (p.y_hat, p.mean_accuracy)).collect();
        let beta = fit_power_exponent(&points).map_or("n/a".to_string(), |b| format!("{b:.4}"));
        Some(format!(
            "{} consistency pairs: max |sqrt(y_hat) - mean_accuracy| = {worst:.4}, fitted accuracy = y_hat^beta with beta = {beta}",
            pairs.len()
        ))
    };
    let strategies = &study.report.strategies;
    out.write("report-summary.txt", |w, p| files::write_summary(w, p, strategies, note.as_deref()))?;
    let mut stdout = std::io::stdout().lock();
    files::write_summary(&mut stdout, &out.prov, strategies, note.as_deref())?;

    match cli.format {
        OutputFormat::Csv => {
            out.write("replication-accuracies.csv", |w, p| files::write_replications(w, p, &study.report))?;
            if let Some(batch) = &study.batch {
                out.write("batch.csv", |w, p| files::write_batch(w, p, batch))?;
            }
            if with_pairs {
                out.write("consistency-pairs.csv", |w, p| files::write_pairs(w, p, &pairs))?;
            }
        }
        OutputFormat::Structured => {
            let view = report_view(strategies);
            out.write("replication-accuracies.json", |w, p| files::write_structured(w, p, "experiment-report", &view))?;
            if let Some(batch) = &study.batch {
                out.write("batch.json", |w, p| files::write_structured(w, p, "batch", batch))?;
            }
            if with_pairs {
                let view: Vec<PairView> = pairs
                    .iter()
                    .map(|x| PairView { strategy: x.strategy.to_string(), y_hat: x.y_hat, mean_accuracy: x.mean_accuracy })
                    .collect();
                out.write("consistency-pairs.json", |w, p| files::write_structured(w, p, "consistency-pairs", &view))?;
            }
        }
    }

    for (strategy, projects) in cfg.strategies.iter().zip(&study.projects) {
        for (r, project) in projects.iter().enumerate() {
            let labels_name = format!("final-labels.{strategy}.r{r}.{e}");
            let ledger_name = format!("ledger.{strategy}.r{r}.{e}");
            match cli.format {
                OutputFormat::Csv => {
                    out.write(&labels_name, |w, p| files::write_final_labels(w, p, &project.final_labels))?;
                    out.write(&ledger_name, |w, p| files::write_ledger(w, p, &project.ledger))?;
                }
                OutputFormat::Structured => {
                    out.write(&labels_name, |w, p| files::write_structured(w, p, "final-labels", &project.final_labels))?;
                    out.write(&ledger_name, |w, p| files::write_structured(w, p, "ledger", &project.ledger))?;
                }
            }
        }
    }
    Ok(out.written)
}

fn liem_audit(cli: &Cli, a: &Path, b: &Path, policy: Option<&str>) -> Result<(LiemEstimate, Vec<PathBuf>)> {
    let cfg = load_config(cli)?;
    let policy: ConflictPolicy = match policy {
        Some(p) => p.parse()?,
        None => cfg.conflict_policy,
    };
    let labels_a = files::read_final_labels(open(a)?).with_context(|| format!("reading {}", a.display()))?;
    let labels_b = files::read_final_labels(open(b)?).with_context(|| format!("reading {}", b.display()))?;
    let est = liem_estimate(&labels_a, &labels_b, policy)?;

    let prov = Provenance { config_hash: config_hash(&cfg), master_seed: cfg.master_seed };
    let name = match cli.format {
        OutputFormat::Csv => "liem-report.txt",
        OutputFormat::Structured => "liem-report.json",
    };
    let mut out = Output::prepare(&cli.out, cli.overwrite, prov, &[name.to_string()])?;
    match cli.format {
        OutputFormat::Csv => out.write(name, |w, p| files::write_liem_report(w, p, &est))?,
        OutputFormat::Structured => out.write(name, |w, p| files::write_structured(w, p, "liem-estimate", &est))?,
    }
    files::write_liem_report(std::io::stdout().lock(), &out.prov, &est)?;
    Ok((est, out.written))
}

fn confusion(cli: &Cli, final_path: &Path, ledger_path: &Path, labels: Option<u32>) -> Result<Vec<PathBuf>> {
    let cfg = load_config(cli)?;
    let space = LabelSpace::new(labels.unwrap_or(cfg.batch.labels))?;
    let finals = files::read_final_labels(open(final_path)?).with_context(|| format!("reading {}", final_path.display()))?;
    let ledger = files::read_ledger(open(ledger_path)?).with_context(|| format!("reading {}", ledger_path.display()))?;
    let cm = confusion_from_parts(&finals, &ledger, space)?;
    if cm.is_zero() {
        eprintln!("warning: no disagreements among in-conflict requests; the matrix is all zero");
    }
    let prov = Provenance { config_hash: config_hash(&cfg), master_seed: cfg.master_seed };
    let name = format!("confusion-matrix.{}", ext(cli.format));
    let mut out = Output::prepare(&cli.out, cli.overwrite, prov, std::slice::from_ref(&name))?;
    match cli.format {
        OutputFormat::Csv => out.write(&name, |w, p| files::write_confusion(w, p, &cm))?,
        OutputFormat::Structured => out.write(&name, |w, p| files::write_structured(w, p, "confusion-matrix", &cm))?,
    }
    Ok(out.written)
}

fn report(cli: &Cli, input: &Path) -> Result<Vec<PathBuf>> {
    let cfg = load_config(cli)?;
    let strategies = files::read_replications(open(input)?).with_context(|| format!("reading {}", input.display()))?;
    let prov = Provenance { config_hash: config_hash(&cfg), master_seed: cfg.master_seed };
    let mut names = vec!["report-summary.txt".to_string()];
    if cli.format == OutputFormat::Structured {
        names.push("report.json".into());
    }
    let mut out = Output::prepare(&cli.out, cli.overwrite, prov, &names)?;
    out.write("report-summary.txt", |w, p| files::write_summary(w, p, &strategies, None))?;
    if cli.format == OutputFormat::Structured {
        let view = report_view(&strategies);
        out.write("report.json", |w, p| files::write_structured(w, p, "experiment-report", &view))?;
    }
    files::write_summary(std::io::stdout().lock(), &out.prov, &strategies, None)?;
    Ok(out.written)
}

/// Runs the selected command and returns the files it wrote.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| match &cli.command {
        Command::Simulate { dump_projects } => simulate(cli, *dump_projects),
        Command::LiemAudit { labels_a, labels_b, policy } => {
            liem_audit(cli, labels_a, labels_b, policy.as_deref()).map(|(_, w)| w)
        }
        Command::Confusion { final_labels, ledger, labels } => confusion(cli, final_labels, ledger, *labels),
        Command::Report { input } => report(cli, input),
    })
}

/// Runs `cli` and maps the outcome to a process exit status, printing a
/// diagnostic on failure.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
