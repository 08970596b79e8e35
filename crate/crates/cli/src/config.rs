//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Every
//! key is optional; missing keys take the defaults below. Unknown or
//! repeated keys are errors.
//!
//! | key              | default      | notes                                   |
//! |------------------|--------------|-----------------------------------------|
//! | `formulation`    | `Original`   | `Original`, `GodunovPowell`, `GLM`, `CurlFree` |
//! | `nx`, `ny`       | `64`         | cells per axis on the unit square, >= 4 |
//! | `c0`             | `1`          |                                         |
//! | `k0`             | `1`          |                                         |
//! | `gamma`          | `2`          |                                         |
//! | `a_c`            | `5`          | curl-cleaning speed                     |
//! | `a_d`            | `a_c`        | divergence-cleaning speed               |
//! | `eps_c`, `eps_d` | `0.1 * a_c`  | damping rates                           |
//! | `cfl`            | `0.45`       |                                         |
//! | `t_end`          | `0.2`        |                                         |
//! | `record_every`   | `1`          | diagnostics cadence in steps            |
//! | `record_interval`| unset        | diagnostics cadence in time; overrides `record_every` |
//! | `reconstruction` | `muscl`      | `muscl` or `first_order`                |
//! | `ic`             | `vortex`     | `vortex`, `periodic_vortex`, `density_wave` |
//! | `output_dir`     | `output`     |                                         |
//! | `snapshots`      | empty        | comma-separated snapshot times          |

use std::path::PathBuf;

use involute_core::diagnostics::InitialCondition;
use involute_core::params::DAMPING_PER_SPEED;
use involute_core::{Formulation, ModelParams, Reconstruction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub formulation: Formulation,
    pub nx: usize,
    pub ny: usize,
    pub params: ModelParams,
    pub t_end: f64,
    pub record_every: usize,
    pub record_interval: Option<f64>,
    pub reconstruction: Reconstruction,
    pub ic: InitialCondition,
    pub output_dir: PathBuf,
    pub snapshot_times: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            formulation: Formulation::Original,
            nx: 64,
            ny: 64,
            params: ModelParams::default(),
            t_end: 0.2,
            record_every: 1,
            record_interval: None,
            reconstruction: Reconstruction::MusclMinmod,
            ic: InitialCondition::Vortex,
            output_dir: PathBuf::from("output"),
            snapshot_times: Vec::new(),
        }
    }
}

const KEYS: &[&str] = &[
    "formulation",
    "nx",
    "ny",
    "c0",
    "k0",
    "gamma",
    "a_c",
    "a_d",
    "eps_c",
    "eps_d",
    "cfl",
    "t_end",
    "record_every",
    "record_interval",
    "reconstruction",
    "ic",
    "output_dir",
    "snapshots",
];

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        message: message.into(),
    }
}

fn number(key: &'static str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| invalid(key, format!("`{raw}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, "must be finite"))
    }
}

fn positive(key: &'static str, raw: &str) -> Result<f64, ConfigError> {
    let v = number(key, raw)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("{v} must be positive")))
    }
}

fn non_negative(key: &'static str, raw: &str) -> Result<f64, ConfigError> {
    let v = number(key, raw)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("{v} must not be negative")))
    }
}

fn count(key: &'static str, raw: &str, min: usize) -> Result<usize, ConfigError> {
    let v: usize = raw
        .parse()
        .map_err(|_| invalid(key, format!("`{raw}` is not a non-negative integer")))?;
    if v >= min {
        Ok(v)
    } else {
        Err(invalid(key, format!("{v} is below the minimum {min}")))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut pairs: Vec<(&'static str, String)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        let key = key.trim();
        let key: &'static str = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| ConfigError::Parse {
                line: line_no,
                message: format!("unknown key `{key}`"),
            })?;
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        pairs.push((key, value.trim().to_string()));
    }

    let get = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_str());
    let mut cfg = RunConfig::default();

    if let Some(v) = get("formulation") {
        cfg.formulation = v.parse().map_err(|e| invalid("formulation", format!("`{v}`: {e}")))?;
    }
    if let Some(v) = get("nx") {
        cfg.nx = count("nx", v, 4)?;
    }
    if let Some(v) = get("ny") {
        cfg.ny = count("ny", v, 4)?;
    }
    let p = &mut cfg.params;
    if let Some(v) = get("c0") {
        p.c0 = positive("c0", v)?;
    }
    if let Some(v) = get("k0") {
        p.k0 = positive("k0", v)?;
    }
    if let Some(v) = get("gamma") {
        p.gamma = number("gamma", v)?;
        if p.gamma <= 1.0 {
            return Err(invalid("gamma", format!("{} must exceed 1", p.gamma)));
        }
    }
    if let Some(v) = get("a_c") {
        p.a_c = positive("a_c", v)?;
    }
    p.a_d = match get("a_d") {
        Some(v) => positive("a_d", v)?,
        None => p.a_c,
    };
    p.eps_c = match get("eps_c") {
        Some(v) => non_negative("eps_c", v)?,
        None => DAMPING_PER_SPEED * p.a_c,
    };
    p.eps_d = match get("eps_d") {
        Some(v) => non_negative("eps_d", v)?,
        None => DAMPING_PER_SPEED * p.a_c,
    };
    if let Some(v) = get("cfl") {
        p.cfl = number("cfl", v)?;
        if !(p.cfl > 0.0 && p.cfl < 1.0) {
            return Err(invalid("cfl", format!("{} must lie in (0, 1)", p.cfl)));
        }
    }
    if let Some(v) = get("t_end") {
        cfg.t_end = non_negative("t_end", v)?;
    }
    if let Some(v) = get("record_every") {
        cfg.record_every = count("record_every", v, 1)?;
    }
    if let Some(v) = get("record_interval") {
        cfg.record_interval = Some(positive("record_interval", v)?);
    }
    if let Some(v) = get("reconstruction") {
        cfg.reconstruction = match v.to_ascii_lowercase().as_str() {
            "muscl" | "muscl_minmod" => Reconstruction::MusclMinmod,
            "first_order" | "firstorder" => Reconstruction::FirstOrder,
            _ => {
                return Err(invalid(
                    "reconstruction",
                    format!("`{v}`: expected muscl or first_order"),
                ))
            }
        };
    }
    if let Some(v) = get("ic") {
        cfg.ic = InitialCondition::from_name(v)
            .ok_or_else(|| invalid("ic", format!("`{v}`: expected vortex, periodic_vortex or density_wave")))?;
    }
    if let Some(v) = get("output_dir") {
        if v.is_empty() {
            return Err(invalid("output_dir", "must not be empty"));
        }
        cfg.output_dir = PathBuf::from(v);
    }
    if let Some(v) = get("snapshots") {
        let mut times = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            times.push(non_negative("snapshots", item)?);
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
        if let Some(&t) = times.iter().find(|&&t| t > cfg.t_end) {
            return Err(invalid("snapshots", format!("{t} lies beyond t_end = {}", cfg.t_end)));
        }
        cfg.snapshot_times = times;
    }

    cfg.params
        .validate(cfg.formulation)
        .map_err(|e| invalid("params", e.to_string()))?;
    Ok(cfg)
}

impl RunConfig {
    /// Serializes back into the flat format; `parse_config` reads it back.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("formulation", self.formulation.name().to_string());
        put("nx", self.nx.to_string());
        put("ny", self.ny.to_string());
        put("c0", format!("{:?}", p.c0));
        put("k0", format!("{:?}", p.k0));
        put("gamma", format!("{:?}", p.gamma));
        put("a_c", format!("{:?}", p.a_c));
        put("a_d", format!("{:?}", p.a_d));
        put("eps_c", format!("{:?}", p.eps_c));
        put("eps_d", format!("{:?}", p.eps_d));
        put("cfl", format!("{:?}", p.cfl));
        put("t_end", format!("{:?}", self.t_end));
        put("record_every", self.record_every.to_string());
        if let Some(dt) = self.record_interval {
            put("record_interval", format!("{dt:?}"));
        }
        put(
            "reconstruction",
            match self.reconstruction {
                Reconstruction::MusclMinmod => "muscl",
                Reconstruction::FirstOrder => "first_order",
            }
            .to_string(),
        );
        put("ic", self.ic.name().to_string());
        put("output_dir", self.output_dir.display().to_string());
        if !self.snapshot_times.is_empty() {
            let list: Vec<String> = self.snapshot_times.iter().map(|t| format!("{t:?}")).collect();
            put("snapshots", list.join(","));
        }
        s
    }
}
