//! C ABI over the `dacr` library.
//!
//! Conventions:
//!
//! * Fallible functions return a [`DacrStatus`] and write results through
//!   out-pointers. On failure a message is available from
//!   [`dacr_last_error_message`] on the same thread.
//! * Configs and reports are opaque handles created by this library and
//!   released with their matching `*_free` function.
//! * Strings returned by this library are owned by the caller and released
//!   with [`dacr_string_free`].
//! * Final labels cross the boundary as `int64_t`, with `-1` meaning
//!   "in conflict".

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dacr::config::{parse_config, render_config};
use dacr::estimation::{
    bhatia_davis_bound, cohen_kappa, consistency_variance_bound, expected_consistency, liem_estimate, ConflictPolicy,
    ConsistencyMode,
};
use dacr::experiments::{run_replications, ExperimentConfig, ExperimentReport};
use dacr::strategies::strict_majority;
use dacr::{Error, FinalLabel, LabelId, LabelSpace};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DacrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EmptySample = 3,
    UndefinedKappa = 4,
    ConfigError = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// Opaque experiment configuration.
pub struct DacrConfig(ExperimentConfig);

/// Opaque experiment report.
pub struct DacrReport(ExperimentReport);

/// Summary statistics of one strategy across replications.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DacrStrategyStats {
    pub mean_accuracy: f64,
    /// Sample variance (denominator k - 1) of the replication accuracies.
    pub accuracy_variance: f64,
    pub average_grades: f64,
    pub grades_per_request: f64,
    pub in_conflict_rate: f64,
}

/// Latent-accuracy estimate from two duplicate projects.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DacrLiemEstimate {
    pub n: u64,
    pub matches: u64,
    pub y_hat: f64,
    pub mu_hat: f64,
    pub variance_bound: f64,
    pub band: f64,
    pub mu_low: f64,
    pub mu_high: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DacrKappa {
    pub pr_a: f64,
    pub pr_e: f64,
    pub kappa: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(DacrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) | Error::Format { .. } => DacrStatus::InvalidArgument,
            Error::EmptySample(_) => DacrStatus::EmptySample,
            Error::UndefinedKappa => DacrStatus::UndefinedKappa,
            Error::Config { .. } => DacrStatus::ConfigError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DacrStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DacrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            DacrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DacrStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn to_final_labels(raw: &[i64]) -> Result<Vec<FinalLabel>, Failure> {
    raw.iter()
        .map(|&l| match l {
            -1 => Ok(FinalLabel::InConflict),
            0..=0xffff_ffff => Ok(FinalLabel::Assigned(LabelId(l as u32))),
            _ => Err(Failure(DacrStatus::InvalidArgument, format!("label {l} is neither -1 nor a valid label id"))),
        })
        .collect()
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message describing the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next call into this library on the
/// same thread. Do not free it.
#[no_mangle]
pub extern "C" fn dacr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dacr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A config holding the reference defaults. Never NULL.
#[no_mangle]
pub extern "C" fn dacr_config_default() -> *mut DacrConfig {
    Box::into_raw(Box::new(DacrConfig(ExperimentConfig::default())))
}

/// Parses config text (NUL-terminated UTF-8) into a new handle.
///
/// # Safety
/// `text` must be a valid C string and `out_config` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_parse(text: *const c_char, out_config: *mut *mut DacrConfig) -> DacrStatus {
    guard(|| {
        let slot = out(out_config, "out_config")?;
        *slot = ptr::null_mut();
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(DacrStatus::InvalidUtf8, format!("config text is not UTF-8: {e}")))?;
        let cfg = parse_config(text)?;
        *slot = Box::into_raw(Box::new(DacrConfig(cfg)));
        Ok(())
    })
}

/// Releases a config handle. NULL is ignored.
///
/// # Safety
/// `config` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_free(config: *mut DacrConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_set_seed(config: *mut DacrConfig, master_seed: u64) -> DacrStatus {
    guard(|| {
        out(config, "config")?.0.master_seed = master_seed;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_set_replications(config: *mut DacrConfig, replications: u32) -> DacrStatus {
    guard(|| {
        let cfg = &mut out(config, "config")?.0;
        let mut next = cfg.clone();
        next.replications = replications;
        next.validate()?;
        *cfg = next;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_set_requests(config: *mut DacrConfig, requests: u32) -> DacrStatus {
    guard(|| {
        let cfg = &mut out(config, "config")?.0;
        let mut next = cfg.clone();
        next.batch.requests = requests;
        next.validate()?;
        *cfg = next;
        Ok(())
    })
}

/// Canonical text form of a config; free with [`dacr_string_free`].
/// Returns NULL if `config` is NULL.
///
/// # Safety
/// `config` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_config_render(config: *const DacrConfig) -> *mut c_char {
    match config.as_ref() {
        Some(c) => into_c_string(render_config(&c.0)),
        None => {
            set_last_error("config is null");
            ptr::null_mut()
        }
    }
}

/// Runs every configured strategy for the configured number of replications.
///
/// # Safety
/// `config` must be a live handle and `out_report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_run_replications(
    config: *const DacrConfig,
    out_report: *mut *mut DacrReport,
) -> DacrStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        let report = run_replications(&cfg.0)?;
        *slot = Box::into_raw(Box::new(DacrReport(report)));
        Ok(())
    })
}

/// Releases a report handle. NULL is ignored.
///
/// # Safety
/// `report` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dacr_report_free(report: *mut DacrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of strategies in a report (0 for NULL).
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_report_strategy_count(report: *const DacrReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.strategies.len())
}

/// Identifier of strategy `index` (e.g. `dacr-2-5`); free with
/// [`dacr_string_free`]. NULL when out of range.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dacr_report_strategy_id(report: *const DacrReport, index: usize) -> *mut c_char {
    match report.as_ref().and_then(|r| r.0.strategies.get(index)) {
        Some(s) => into_c_string(s.strategy.to_string()),
        None => {
            set_last_error(format!("no strategy at index {index}"));
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `report` must be a live handle and `out_stats` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_report_stats(
    report: *const DacrReport,
    index: usize,
    out_stats: *mut DacrStrategyStats,
) -> DacrStatus {
    guard(|| {
        let slot = out(out_stats, "out_stats")?;
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let s = report
            .0
            .strategies
            .get(index)
            .ok_or_else(|| Failure(DacrStatus::InvalidArgument, format!("no strategy at index {index}")))?
            .stats();
        *slot = DacrStrategyStats {
            mean_accuracy: s.mean_accuracy,
            accuracy_variance: s.accuracy_variance,
            average_grades: s.average_grades,
            grades_per_request: s.grades_per_request,
            in_conflict_rate: s.in_conflict_rate,
        };
        Ok(())
    })
}

/// Expected agreement of two independent processes with accuracies `p`, `q`
/// over `m` labels. `approximate` selects the `p * q` form.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_expected_consistency(
    p: f64,
    q: f64,
    m: u32,
    approximate: bool,
    out_value: *mut f64,
) -> DacrStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let mode = if approximate { ConsistencyMode::Approximate } else { ConsistencyMode::Exact };
        *slot = expected_consistency(p, q, m, mode)?;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_bhatia_davis_bound(mu: f64, upper: f64, lower: f64, out_value: *mut f64) -> DacrStatus {
    guard(|| {
        *out(out_value, "out_value")? = bhatia_davis_bound(mu, upper, lower)?;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_consistency_variance_bound(n: usize, out_value: *mut f64) -> DacrStatus {
    guard(|| {
        *out(out_value, "out_value")? = consistency_variance_bound(n)?;
        Ok(())
    })
}

/// Latent-accuracy estimate from two final-label arrays of length `len`.
/// With `exclude_conflicts`, pairs involving `-1` are dropped instead of
/// counted as mismatches.
///
/// # Safety
/// `labels_a` and `labels_b` must point to `len` readable values and
/// `out_estimate` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_liem_estimate(
    labels_a: *const i64,
    labels_b: *const i64,
    len: usize,
    exclude_conflicts: bool,
    out_estimate: *mut DacrLiemEstimate,
) -> DacrStatus {
    guard(|| {
        let slot = out(out_estimate, "out_estimate")?;
        let a = to_final_labels(slice(labels_a, len, "labels_a")?)?;
        let b = to_final_labels(slice(labels_b, len, "labels_b")?)?;
        let policy = if exclude_conflicts { ConflictPolicy::Exclude } else { ConflictPolicy::PairMismatch };
        let est = liem_estimate(&a, &b, policy)?;
        let (mu_low, mu_high) = est.mu_interval();
        *slot = DacrLiemEstimate {
            n: est.n as u64,
            matches: est.matches as u64,
            y_hat: est.y_hat,
            mu_hat: est.mu_hat,
            variance_bound: est.variance_bound,
            band: est.band,
            mu_low,
            mu_high,
        };
        Ok(())
    })
}

/// Cohen's kappa between two raters over `m` labels; `-1` entries form their
/// own "in conflict" category.
///
/// # Safety
/// `labels_a` and `labels_b` must point to `len` readable values and
/// `out_kappa` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_cohen_kappa(
    labels_a: *const i64,
    labels_b: *const i64,
    len: usize,
    m: u32,
    out_kappa: *mut DacrKappa,
) -> DacrStatus {
    guard(|| {
        let slot = out(out_kappa, "out_kappa")?;
        let a = to_final_labels(slice(labels_a, len, "labels_a")?)?;
        let b = to_final_labels(slice(labels_b, len, "labels_b")?)?;
        let k = cohen_kappa(&a, &b, LabelSpace::new(m)?)?;
        *slot = DacrKappa { pr_a: k.pr_a, pr_e: k.pr_e, kappa: k.kappa };
        Ok(())
    })
}

/// Label held by more than half of `labels`, or `-1` if there is none.
///
/// # Safety
/// `labels` must point to `len` readable values and `out_label` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dacr_strict_majority(labels: *const u32, len: usize, out_label: *mut i64) -> DacrStatus {
    guard(|| {
        let slot = out(out_label, "out_label")?;
        let labels: Vec<LabelId> = slice(labels, len, "labels")?.iter().map(|&l| LabelId(l)).collect();
        *slot = strict_majority(&labels)?.map_or(-1, |l| i64::from(l.0));
        Ok(())
    })
}
