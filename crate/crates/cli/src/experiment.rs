//! Runs a configured experiment and writes its outputs.
//!
//! Exit codes:
//!
//! | code | meaning                                            |
//! |------|----------------------------------------------------|
//! | 0    | success                                            |
//! | 1    | unreadable or invalid configuration / initial data |
//! | 2    | solver abort (positivity loss, time-step underflow)|
//! | 3    | I/O failure while writing outputs                  |

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use involute_core::diagnostics::{initial_condition, DiagnosticsRecord, Recorder};
use involute_core::{Formulation, Grid2D, Simulation, SolverConfig};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::output::{merge_curl_columns, vtk_snapshot, write_series};

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Number of diagnostic intervals `compare` uses when no `record_interval` is set.
pub const COMPARE_INTERVALS: usize = 100;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("invalid setup: {0}")]
    Setup(involute_core::Error),
    #[error("solver aborted: {0}")]
    Solver(involute_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Merge(String),
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::ReadConfig { .. } | Self::Setup(_) => EXIT_CONFIG,
            Self::Solver(_) => EXIT_SOLVER,
            Self::Io { .. } | Self::Merge(_) => EXIT_IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|source| ExperimentError::ReadConfig {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(crate::config::parse_config(&text)?)
}

/// Summary of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<PathBuf>,
    pub steps: usize,
}

/// Diagnostics and snapshots without touching the file system.
pub struct RunResult {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<(f64, String)>,
    pub steps: usize,
}

/// Steps the configured simulation to `t_end`, landing exactly on every
/// snapshot time and, if set, every multiple of `record_interval`.
pub fn simulate(config: &RunConfig) -> Result<RunResult, ExperimentError> {
    let grid = Grid2D::unit_square(config.nx, config.ny).map_err(ExperimentError::Setup)?;
    let solver = SolverConfig {
        t_end: config.t_end,
        cfl: config.params.cfl,
        reconstruction: config.reconstruction,
        record_every: config.record_every,
        max_steps: None,
    };
    let initial = initial_condition(config.ic, &grid, config.formulation);
    let mut sim =
        Simulation::new(config.formulation, config.params, grid, solver, initial).map_err(ExperimentError::Setup)?;
    let mut recorder = Recorder::new(config.formulation, config.params, grid);
    let mut snapshots = Vec::new();

    let record = |rec: &mut Recorder, sim: &Simulation| {
        rec.record(sim.time(), sim.solution())
            .map(|_| ())
            .map_err(ExperimentError::Solver)
    };
    let mut pending_snaps = config.snapshot_times.iter().copied().peekable();
    let mut take_snapshots = |sim: &Simulation, out: &mut Vec<(f64, String)>| {
        while let Some(&ts) = pending_snaps.peek() {
            if ts > sim.time() {
                break;
            }
            out.push((ts, vtk_snapshot(sim.solution(), &grid, config.formulation, sim.time())));
            pending_snaps.next();
        }
    };

    record(&mut recorder, &sim)?;
    take_snapshots(&sim, &mut snapshots);
    let mut next_record = 1usize;
    while sim.time() < config.t_end {
        let record_target = config
            .record_interval
            .map(|h| (next_record as f64 * h).min(config.t_end));
        let snap_target = config.snapshot_times.iter().copied().find(|&ts| ts > sim.time());
        let limit = [record_target, snap_target]
            .into_iter()
            .flatten()
            .fold(config.t_end, f64::min);
        sim.step_to(limit).map_err(ExperimentError::Solver)?;
        let due = match record_target {
            Some(tr) => {
                let hit = sim.time() >= tr;
                if hit {
                    next_record += 1;
                }
                hit
            }
            None => sim.steps() % config.record_every == 0,
        };
        if due || sim.time() >= config.t_end {
            record(&mut recorder, &sim)?;
        }
        take_snapshots(&sim, &mut snapshots);
    }
    Ok(RunResult {
        records: recorder.records,
        snapshots,
        steps: sim.steps(),
    })
}

/// Runs `config` and writes `series.csv`, `config.txt` and one
/// `snapshot_NNNN.vtk` per snapshot time into the output directory.
pub fn run_experiment(config: &RunConfig, out_override: Option<&Path>) -> Result<RunOutput, ExperimentError> {
    let dir = out_override.unwrap_or(&config.output_dir);
    let result = simulate(config)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let series = dir.join("series.csv");
    let file = fs::File::create(&series).map_err(io_err(&series))?;
    write_series(BufWriter::new(file), &result.records).map_err(io_err(&series))?;

    let cfg = dir.join("config.txt");
    fs::write(&cfg, config.to_text()).map_err(io_err(&cfg))?;

    let mut snapshots = Vec::new();
    for (i, (_, vtk)) in result.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{i:04}.vtk"));
        fs::write(&path, vtk).map_err(io_err(&path))?;
        snapshots.push(path);
    }
    Ok(RunOutput {
        records: result.records,
        snapshots,
        steps: result.steps,
    })
}

/// Runs `config` once per formulation into `<out>/<name>/` and writes the
/// merged `compare.csv` with one `curl_L2_<name>` column each.
pub fn compare(
    config: &RunConfig,
    formulations: &[Formulation],
    out_override: Option<&Path>,
) -> Result<PathBuf, ExperimentError> {
    let dir = out_override.unwrap_or(&config.output_dir);
    let mut base = config.clone();
    if base.record_interval.is_none() {
        base.record_interval = Some(base.t_end / COMPARE_INTERVALS as f64);
    }
    let mut runs = Vec::new();
    for &f in formulations {
        let cfg = RunConfig {
            formulation: f,
            ..base.clone()
        };
        cfg.params.validate(f).map_err(ExperimentError::Setup)?;
        let out = run_experiment(&cfg, Some(&dir.join(f.name())))?;
        runs.push((f, out.records));
    }
    let merged = merge_curl_columns(&runs).map_err(ExperimentError::Merge)?;
    let path = dir.join("compare.csv");
    fs::write(&path, merged).map_err(io_err(&path))?;
    Ok(path)
}
