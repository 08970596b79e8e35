//! Experiment driver for the `involute` solvers: configuration parsing,
//! runs, CSV time series and VTK snapshots.

pub mod config;
pub mod experiment;
pub mod output;
