//! Delimited-text and JSON file formats.
//!
//! Every file starts with a provenance comment,
//! `# dacr config_hash=<hex> master_seed=<u64>`, followed by a one-line
//! column header. JSON files carry the same fields under `"header"`.
//!
//! | file                     | columns                                                      |
//! |--------------------------|--------------------------------------------------------------|
//! | final labels             | `request_id,final_label` (`IN_CONFLICT` marker)              |
//! | ledger                   | `request_id,sequence_index,worker_id,label`                  |
//! | batch                    | `id,ground_truth,difficulty`                                 |
//! | replication accuracies   | `strategy,replication,accuracy,grades,in_conflict_rate,requests` |
//! | consistency pairs        | `strategy,y_hat,mean_accuracy`                               |
//! | confusion matrix         | `label_a,label_b,raw,normalized`                             |

use std::io::{self, Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{RequestBatch, WorkerId};
use crate::error::Error;
use crate::estimation::{ConfusionMatrix, LiemEstimate};
use crate::experiments::{ConsistencyAccuracyPair, ExperimentReport, ReplicationSummary, StrategyReport};
use crate::labels::{FinalLabel, LabelId, LabelSpace, Request};
use crate::strategies::{GradeRecord, StrategyConfig};

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
    #[error(transparent)]
    Domain(#[from] Error),
}

pub type FileResult<T> = std::result::Result<T, FileError>;

/// Config hash and master seed stamped on every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub master_seed: u64,
}

impl Provenance {
    pub fn header_line(&self) -> String {
        format!("# dacr config_hash={} master_seed={}", self.config_hash, self.master_seed)
    }
}

#[derive(Serialize)]
struct Structured<'a, T: Serialize> {
    header: &'a Provenance,
    kind: &'a str,
    data: &'a T,
}

/// Writes `data` as pretty JSON under a provenance header.
pub fn write_structured<W: Write, T: Serialize>(mut w: W, prov: &Provenance, kind: &str, data: &T) -> FileResult<()> {
    serde_json::to_writer_pretty(&mut w, &Structured { header: prov, kind, data })?;
    writeln!(w)?;
    Ok(())
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).has_headers(true).from_reader(r)
}

fn check_headers<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> FileResult<()> {
    let headers = rdr.headers()?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(FileError::Format {
            line: 1,
            message: format!("expected columns `{}`, found `{}`", expected.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    Ok(())
}

fn rows<R: Read, T: DeserializeOwned>(r: R, columns: &[&str]) -> FileResult<Vec<(u64, T)>> {
    let mut rdr = reader(r);
    check_headers(&mut rdr, columns)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: T = rec.deserialize(None).map_err(|e| FileError::Format { line, message: e.to_string() })?;
        out.push((line, row));
    }
    Ok(out)
}

const FINAL_COLUMNS: &[&str] = &["request_id", "final_label"];
const LEDGER_COLUMNS: &[&str] = &["request_id", "sequence_index", "worker_id", "label"];
const BATCH_COLUMNS: &[&str] = &["id", "ground_truth", "difficulty"];
const REPLICATION_COLUMNS: &[&str] = &["strategy", "replication", "accuracy", "grades", "in_conflict_rate", "requests"];
const PAIR_COLUMNS: &[&str] = &["strategy", "y_hat", "mean_accuracy"];
const CONFUSION_COLUMNS: &[&str] = &["label_a", "label_b", "raw", "normalized"];

fn preamble<W: Write>(w: &mut W, prov: &Provenance, columns: &[&str]) -> io::Result<()> {
    writeln!(w, "{}", prov.header_line())?;
    writeln!(w, "{}", columns.join(","))
}

pub fn write_final_labels<W: Write>(mut w: W, prov: &Provenance, labels: &[FinalLabel]) -> FileResult<()> {
    preamble(&mut w, prov, FINAL_COLUMNS)?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(w, "{i},{l}")?;
    }
    Ok(())
}

/// Reads final labels; request ids must be `0..n` in order.
pub fn read_final_labels<R: Read>(r: R) -> FileResult<Vec<FinalLabel>> {
    let rows: Vec<(u64, (u32, String))> = rows(r, FINAL_COLUMNS)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, (line, (id, label)))| {
            if id as usize != i {
                return Err(FileError::Format { line, message: format!("expected request id {i}, found {id}") });
            }
            label.parse::<FinalLabel>().map_err(|e| FileError::Format { line, message: e.to_string() })
        })
        .collect()
}

pub fn write_ledger<W: Write>(mut w: W, prov: &Provenance, ledger: &[GradeRecord]) -> FileResult<()> {
    preamble(&mut w, prov, LEDGER_COLUMNS)?;
    for g in ledger {
        writeln!(w, "{},{},{},{}", g.request_id, g.sequence_index, g.worker_id.0, g.label)?;
    }
    Ok(())
}

pub fn read_ledger<R: Read>(r: R) -> FileResult<Vec<GradeRecord>> {
    let rows: Vec<(u64, (u32, u32, u32, u32))> = rows(r, LEDGER_COLUMNS)?;
    Ok(rows
        .into_iter()
        .map(|(_, (request_id, sequence_index, w, l))| GradeRecord {
            request_id,
            sequence_index,
            worker_id: WorkerId(w),
            label: LabelId(l),
        })
        .collect())
}

pub fn write_batch<W: Write>(mut w: W, prov: &Provenance, batch: &RequestBatch) -> FileResult<()> {
    preamble(&mut w, prov, BATCH_COLUMNS)?;
    for r in batch.requests() {
        writeln!(w, "{},{},{:?}", r.id, r.ground_truth, r.difficulty)?;
    }
    Ok(())
}

pub fn read_batch<R: Read>(r: R, space: LabelSpace) -> FileResult<RequestBatch> {
    let rows: Vec<(u64, (u32, u32, f64))> = rows(r, BATCH_COLUMNS)?;
    let requests = rows
        .into_iter()
        .map(|(line, (id, g, d))| {
            Request::new(id, LabelId(g), d, space).map_err(|e| FileError::Format { line, message: e.to_string() })
        })
        .collect::<FileResult<Vec<_>>>()?;
    Ok(RequestBatch::new(requests, space)?)
}

pub fn write_replications<W: Write>(mut w: W, prov: &Provenance, report: &ExperimentReport) -> FileResult<()> {
    preamble(&mut w, prov, REPLICATION_COLUMNS)?;
    for s in &report.strategies {
        for r in &s.replications {
            writeln!(
                w,
                "{},{},{:?},{},{:?},{}",
                s.strategy,
                r.replication,
                r.accuracy,
                r.total_grades,
                r.in_conflict_rate(),
                r.requests
            )?;
        }
    }
    Ok(())
}

/// `strategy, replication, accuracy, grades, in_conflict_rate, requests`
type ReplicationRow = (String, u32, f64, u64, f64, u64);

/// Reads a replication-accuracies file back into per-strategy reports, in
/// first-appearance order.
pub fn read_replications<R: Read>(r: R) -> FileResult<Vec<StrategyReport>> {
    let rows: Vec<(u64, ReplicationRow)> = rows(r, REPLICATION_COLUMNS)?;
    let mut out: Vec<StrategyReport> = Vec::new();
    for (line, (id, replication, accuracy, total_grades, rate, requests)) in rows {
        let strategy: StrategyConfig = id.parse().map_err(|e: Error| FileError::Format { line, message: e.to_string() })?;
        if requests == 0 || !(0.0..=1.0).contains(&accuracy) || !(0.0..=1.0).contains(&rate) {
            return Err(FileError::Format { line, message: "rates must lie in [0, 1] and requests be positive".into() });
        }
        let summary = ReplicationSummary {
            replication,
            accuracy,
            total_grades,
            in_conflict: (rate * requests as f64).round() as u64,
            requests,
        };
        match out.iter_mut().find(|s| s.strategy == strategy) {
            Some(s) => s.replications.push(summary),
            None => out.push(StrategyReport { strategy, replications: vec![summary] }),
        }
    }
    if out.is_empty() {
        return Err(FileError::Format { line: 1, message: "no replication rows".into() });
    }
    Ok(out)
}

pub fn write_pairs<W: Write>(mut w: W, prov: &Provenance, pairs: &[ConsistencyAccuracyPair]) -> FileResult<()> {
    preamble(&mut w, prov, PAIR_COLUMNS)?;
    for p in pairs {
        writeln!(w, "{},{:?},{:?}", p.strategy, p.y_hat, p.mean_accuracy)?;
    }
    Ok(())
}

pub fn write_confusion<W: Write>(mut w: W, prov: &Provenance, cm: &ConfusionMatrix) -> FileResult<()> {
    preamble(&mut w, prov, CONFUSION_COLUMNS)?;
    for i in 0..cm.size() {
        for j in 0..cm.size() {
            writeln!(w, "{i},{j},{},{:?}", cm.raw(i, j), cm.normalized(i, j))?;
        }
    }
    Ok(())
}

/// Flat `key=value` LIEM report.
pub fn write_liem_report<W: Write>(mut w: W, prov: &Provenance, est: &LiemEstimate) -> FileResult<()> {
    let (lo, hi) = est.mu_interval();
    writeln!(w, "{}", prov.header_line())?;
    writeln!(w, "n={}", est.n)?;
    writeln!(w, "matches={}", est.matches)?;
    writeln!(w, "y_hat={:?}", est.y_hat)?;
    writeln!(w, "mu_hat={:?}", est.mu_hat)?;
    writeln!(w, "variance_bound={:?}", est.variance_bound)?;
    writeln!(w, "band={:?}", est.band)?;
    writeln!(w, "mu_low={lo:?}")?;
    writeln!(w, "mu_high={hi:?}")?;
    writeln!(w, "conflict_policy={}", est.conflict_policy)?;
    Ok(())
}

/// Human-readable summary with one row per strategy.
pub fn write_summary<W: Write>(
    mut w: W,
    prov: &Provenance,
    strategies: &[StrategyReport],
    note: Option<&str>,
) -> FileResult<()> {
    writeln!(w, "{}", prov.header_line())?;
    if let Some(note) = note {
        writeln!(w, "# {note}")?;
    }
    writeln!(
        w,
        "{:<14} {:>5} {:>9} {:>10} {:>11} {:>11} {:>11}",
        "strategy", "reps", "mean_acc", "variance", "avg_grades", "grades/req", "in_conflict"
    )?;
    for s in strategies {
        let st = s.stats();
        writeln!(
            w,
            "{:<14} {:>5} {:>8.2}% {:>10.3e} {:>11.1} {:>11.3} {:>10.2}%",
            s.strategy.to_string(),
            s.replications.len(),
            100.0 * st.mean_accuracy,
            st.accuracy_variance,
            st.average_grades,
            st.grades_per_request,
            100.0 * st.in_conflict_rate
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{sample_request_batch, BatchParams};
    use crate::experiments::{run_study, ExperimentConfig, Retention};
    use crate::stream::SeedSpec;
    use proptest::prelude::*;

    fn prov() -> Provenance {
        Provenance { config_hash: "00ff".into(), master_seed: 3 }
    }

    proptest! {
        #[test]
        fn final_labels_round_trip(raw in prop::collection::vec(prop::option::of(0u32..60), 1..200)) {
            let labels: Vec<FinalLabel> = raw.into_iter().map(|o| o.map_or(FinalLabel::InConflict, |v| FinalLabel::Assigned(LabelId(v)))).collect();
            let mut buf = Vec::new();
            write_final_labels(&mut buf, &prov(), &labels).unwrap();
            prop_assert_eq!(read_final_labels(&buf[..]).unwrap(), labels);
        }
    }

    #[test]
    fn study_files_round_trip() {
        let cfg = ExperimentConfig {
            batch: BatchParams { requests: 300, ..Default::default() },
            replications: 3,
            ..Default::default()
        };
        let study = run_study(&cfg, Retention { final_labels: false, projects: 1 }).unwrap();

        let mut buf = Vec::new();
        write_replications(&mut buf, &prov(), &study.report).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# dacr config_hash=00ff master_seed=3\n"));
        assert_eq!(read_replications(&buf[..]).unwrap(), study.report.strategies);

        let project = &study.projects[4][0];
        let mut buf = Vec::new();
        write_ledger(&mut buf, &prov(), &project.ledger).unwrap();
        assert_eq!(read_ledger(&buf[..]).unwrap(), project.ledger);

        let batch = study.batch.unwrap();
        let mut buf = Vec::new();
        write_batch(&mut buf, &prov(), &batch).unwrap();
        assert_eq!(read_batch(&buf[..], batch.label_space()).unwrap(), batch);
    }

    #[test]
    fn batch_reload_checks_label_space() {
        let batch = sample_request_batch(&BatchParams { requests: 50, ..Default::default() }, &mut SeedSpec::new(1).derive_stream()).unwrap();
        let mut buf = Vec::new();
        write_batch(&mut buf, &prov(), &batch).unwrap();
        assert!(read_batch(&buf[..], LabelSpace::new(2).unwrap()).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_final_labels("request_id,label\n0,1\n".as_bytes()).is_err());
        assert!(read_final_labels("request_id,final_label\n1,1\n".as_bytes()).is_err());
        let e = read_final_labels("# c\nrequest_id,final_label\n0,1\n1,oops\n".as_bytes()).unwrap_err();
        assert!(matches!(e, FileError::Format { line: 4, .. }), "{e}");
        assert!(read_replications("strategy,replication,accuracy,grades,in_conflict_rate,requests\n".as_bytes()).is_err());
        assert!(read_replications(
            "strategy,replication,accuracy,grades,in_conflict_rate,requests\nfour-grader,0,0.5,1,0,10\n".as_bytes()
        )
        .is_err());
    }

    #[test]
    fn structured_has_header() {
        let mut buf = Vec::new();
        write_structured(&mut buf, &prov(), "labels", &vec![FinalLabel::InConflict]).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["header"]["master_seed"], 3);
        assert_eq!(v["kind"], "labels");
    }
}
