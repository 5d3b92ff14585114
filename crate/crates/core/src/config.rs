//! Sectioned key-value experiment configuration.
//!
//! ```text
//! # comment
//! [experiment]
//! master_seed = 42
//! replications = 1e2
//!
//! [batch]
//! requests = 10000
//! difficulty_sd = 0.1
//!
//! [strategies]
//! strategy = one-grader
//! strategy = dacr, min=2, max=5
//! ```
//!
//! Section headers are optional; a key given before any header is accepted
//! wherever it belongs. Unspecified keys keep their defaults. Any `strategy`
//! line replaces the default strategy list.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::agents::CapabilityRange;
use crate::error::{Error, Result};
use crate::experiments::ExperimentConfig;
use crate::strategies::StrategyConfig;

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "experiment",
        &["master_seed", "replications", "fixed_batch", "resample_pools", "accuracy_policy", "conflict_policy"],
    ),
    ("batch", &["requests", "labels", "difficulty_mean", "difficulty_sd"]),
    ("workers", &["regular_count", "regular_min", "regular_max", "expert_count", "expert_min", "expert_max"]),
    ("strategies", &["strategy"]),
];

fn err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config { line, key: key.to_string(), message: message.into() }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(line, key, format!("`{v}` is not a finite number")))
}

// Integers accept scientific notation as long as the value is integral.
fn parse_int(line: usize, key: &str, v: &str, min: u64, max: u64) -> Result<u64> {
    let n = match v.parse::<u64>() {
        Ok(n) => n,
        Err(_) => {
            let x = parse_f64(line, key, v)?;
            if x.fract() != 0.0 || x < 0.0 || x > u64::MAX as f64 {
                return Err(err(line, key, format!("`{v}` is not a non-negative integer")));
            }
            x as u64
        }
    };
    if n < min || n > max {
        return Err(err(line, key, format!("{n} outside [{min}, {max}]")));
    }
    Ok(n)
}

fn parse_unit(line: usize, key: &str, v: &str) -> Result<f64> {
    let x = parse_f64(line, key, v)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(err(line, key, format!("{x} outside [0, 1]")));
    }
    Ok(x)
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(err(line, key, format!("`{v}` is not a boolean"))),
    }
}

/// Parses `kind[, opt=value]*`, e.g. `dacr, min=2, max=5` or `n-graded, n=7`.
/// The compact ids `n-graded-7` and `dacr-2-5` are accepted too.
fn parse_strategy(line: usize, v: &str) -> Result<StrategyConfig> {
    const KEY: &str = "strategy";
    let mut parts = v.split(',').map(str::trim);
    let kind = parts.next().unwrap_or_default();
    let mut opts: HashMap<&str, u64> = HashMap::new();
    for p in parts {
        let (k, val) = p.split_once('=').ok_or_else(|| err(line, KEY, format!("option `{p}` is not name=value")))?;
        let (k, val) = (k.trim(), val.trim());
        if opts.insert(k, parse_int(line, KEY, val, 0, u64::from(u32::MAX))?).is_some() {
            return Err(err(line, KEY, format!("option `{k}` repeated")));
        }
    }
    let allowed: &[&str] = match kind {
        "one-grader" | "dg-cr" => &[],
        "n-graded" => &["n"],
        "dacr" => &["min", "max"],
        _ if opts.is_empty() => {
            return kind.parse::<StrategyConfig>().map_err(|e| err(line, KEY, e.to_string()));
        }
        _ => return Err(err(line, KEY, format!("unknown strategy `{kind}`"))),
    };
    if let Some(k) = opts.keys().find(|k| !allowed.contains(k)) {
        return Err(err(line, KEY, format!("`{kind}` takes no option `{k}`")));
    }
    let get = |k: &str, default: Option<u64>| -> Result<u32> {
        opts.get(k)
            .copied()
            .or(default)
            .map(|x| x as u32)
            .ok_or_else(|| err(line, KEY, format!("`{kind}` needs option `{k}`")))
    };
    let cfg = match kind {
        "one-grader" => StrategyConfig::OneGrader,
        "dg-cr" => StrategyConfig::DgCr,
        "n-graded" => StrategyConfig::NGraded { n: get("n", None)? },
        _ => StrategyConfig::Dacr { min_grades: get("min", Some(2))?, max_grades: get("max", Some(5))? },
    };
    cfg.validate().map_err(|e| err(line, KEY, e.to_string()))?;
    Ok(cfg)
}

/// Parses a configuration document. Missing keys take the reference defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut section: Option<&str> = None;
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut strategies: Vec<(usize, StrategyConfig)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .map(str::trim)
                .ok_or_else(|| err(line, content, "unterminated section header"))?;
            let known = SECTIONS
                .iter()
                .find(|(s, _)| *s == name)
                .ok_or_else(|| err(line, name, "unknown section"))?;
            section = Some(known.0);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(line, content, "expected `key = value`"))?;
        let home = SECTIONS
            .iter()
            .find(|(_, keys)| keys.contains(&key))
            .map(|(s, _)| *s)
            .ok_or_else(|| err(line, key, "unknown key"))?;
        if let Some(s) = section {
            if s != home {
                return Err(err(line, key, format!("key belongs in [{home}], not [{s}]")));
            }
        }
        if value.is_empty() {
            return Err(err(line, key, "missing value"));
        }
        if key == "strategy" {
            let s = parse_strategy(line, value)?;
            if strategies.iter().any(|(_, t)| *t == s) {
                return Err(err(line, key, format!("strategy {s} listed twice")));
            }
            strategies.push((line, s));
            continue;
        }
        if let Some(prev) = seen.insert(key, line) {
            return Err(err(line, key, format!("duplicate key (first set on line {prev})")));
        }
        let u32max = u64::from(u32::MAX);
        match key {
            "master_seed" => cfg.master_seed = parse_int(line, key, value, 0, u64::MAX)?,
            "replications" => cfg.replications = parse_int(line, key, value, 1, u32max)? as u32,
            "fixed_batch" => cfg.fixed_batch = parse_bool(line, key, value)?,
            "resample_pools" => cfg.resample_pools = parse_bool(line, key, value)?,
            "accuracy_policy" => cfg.accuracy_policy = value.parse().map_err(|e: Error| err(line, key, e.to_string()))?,
            "conflict_policy" => cfg.conflict_policy = value.parse().map_err(|e: Error| err(line, key, e.to_string()))?,
            "requests" => cfg.batch.requests = parse_int(line, key, value, 1, u32max)? as u32,
            "labels" => cfg.batch.labels = parse_int(line, key, value, 2, u32max)? as u32,
            "difficulty_mean" => cfg.batch.difficulty_mean = parse_f64(line, key, value)?,
            "difficulty_sd" => {
                let sd = parse_f64(line, key, value)?;
                if sd < 0.0 {
                    return Err(err(line, key, format!("{sd} must be >= 0")));
                }
                cfg.batch.difficulty_sd = sd;
            }
            "regular_count" => cfg.pool.regular_count = parse_int(line, key, value, 1, u32max)? as u32,
            "expert_count" => cfg.pool.expert_count = parse_int(line, key, value, 1, u32max)? as u32,
            "regular_min" => cfg.pool.regular_range.lo = parse_unit(line, key, value)?,
            "regular_max" => cfg.pool.regular_range.hi = parse_unit(line, key, value)?,
            "expert_min" => cfg.pool.expert_range.lo = parse_unit(line, key, value)?,
            "expert_max" => cfg.pool.expert_range.hi = parse_unit(line, key, value)?,
            _ => unreachable!("key table and match arms disagree on `{key}`"),
        }
    }

    let at = |key: &str| seen.get(key).copied().unwrap_or(0);
    for (range, lo, hi) in [
        (cfg.pool.regular_range, "regular_min", "regular_max"),
        (cfg.pool.expert_range, "expert_min", "expert_max"),
    ] {
        if let Err(e) = CapabilityRange::new(range.lo, range.hi) {
            let key = if at(hi) >= at(lo) { hi } else { lo };
            return Err(err(at(key), key, e.to_string()));
        }
    }
    if !strategies.is_empty() {
        for (line, s) in &strategies {
            let needed = match *s {
                StrategyConfig::NGraded { n } => n,
                StrategyConfig::Dacr { max_grades, .. } => max_grades,
                _ => 2,
            };
            if needed > cfg.pool.regular_count {
                return Err(err(
                    *line,
                    "strategy",
                    format!("{s} needs {needed} distinct regular workers, regular_count is {}", cfg.pool.regular_count),
                ));
            }
        }
        cfg.strategies = strategies.into_iter().map(|(_, s)| s).collect();
    }
    cfg.validate().map_err(|e| err(0, "", e.to_string()))?;
    Ok(cfg)
}

fn strategy_line(s: &StrategyConfig) -> String {
    match *s {
        StrategyConfig::OneGrader => "one-grader".into(),
        StrategyConfig::DgCr => "dg-cr".into(),
        StrategyConfig::NGraded { n } => format!("n-graded, n={n}"),
        StrategyConfig::Dacr { min_grades, max_grades } => format!("dacr, min={min_grades}, max={max_grades}"),
    }
}

/// Canonical document for `cfg`; `parse_config(render_config(c)) == c`.
pub fn render_config(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    out.push_str("[experiment]\n");
    out.push_str(&format!("master_seed = {}\n", cfg.master_seed));
    out.push_str(&format!("replications = {}\n", cfg.replications));
    out.push_str(&format!("fixed_batch = {}\n", cfg.fixed_batch));
    out.push_str(&format!("resample_pools = {}\n", cfg.resample_pools));
    out.push_str(&format!("accuracy_policy = {}\n", cfg.accuracy_policy));
    out.push_str(&format!("conflict_policy = {}\n", cfg.conflict_policy));
    out.push_str("\n[batch]\n");
    out.push_str(&format!("requests = {}\n", cfg.batch.requests));
    out.push_str(&format!("labels = {}\n", cfg.batch.labels));
    out.push_str(&format!("difficulty_mean = {:?}\n", cfg.batch.difficulty_mean));
    out.push_str(&format!("difficulty_sd = {:?}\n", cfg.batch.difficulty_sd));
    out.push_str("\n[workers]\n");
    out.push_str(&format!("regular_count = {}\n", cfg.pool.regular_count));
    out.push_str(&format!("regular_min = {:?}\n", cfg.pool.regular_range.lo));
    out.push_str(&format!("regular_max = {:?}\n", cfg.pool.regular_range.hi));
    out.push_str(&format!("expert_count = {}\n", cfg.pool.expert_count));
    out.push_str(&format!("expert_min = {:?}\n", cfg.pool.expert_range.lo));
    out.push_str(&format!("expert_max = {:?}\n", cfg.pool.expert_range.hi));
    out.push_str("\n[strategies]\n");
    for s in &cfg.strategies {
        out.push_str(&format!("strategy = {}\n", strategy_line(s)));
    }
    out
}

/// First 16 hex digits of the SHA-256 of the canonical rendering.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let digest = Sha256::digest(render_config(cfg).as_bytes());
    hex::encode(&digest[..8])
}
