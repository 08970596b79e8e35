//! Shared runners for the acceptance suite in `tests/acceptance.rs`.

use involute_core::diagnostics::{initial_condition, InitialCondition, Recorder};
use involute_core::{Formulation, Grid2D, ModelParams, Result, Simulation, Solution, SolverConfig};

/// Runs `formulation` from `initial`, recording diagnostics after every step.
pub fn recorded_run(
    formulation: Formulation,
    params: ModelParams,
    grid: Grid2D,
    config: SolverConfig,
    initial: Solution,
) -> Result<(Simulation, Recorder)> {
    let mut sim = Simulation::new(formulation, params, grid, config, initial)?;
    let mut rec = Recorder::new(formulation, params, grid);
    sim.run(&mut |t, s| rec.record(t, s).map(|_| ()))?;
    Ok((sim, rec))
}

/// Time-averaged `curl_L2` of the vortex over `[0, t_end]`.
pub fn vortex_curl_average(formulation: Formulation, params: ModelParams, n: usize, t_end: f64) -> Result<f64> {
    let grid = Grid2D::unit_square(n, n)?;
    let config = SolverConfig {
        t_end,
        cfl: params.cfl,
        ..Default::default()
    };
    let init = initial_condition(InitialCondition::Vortex, &grid, formulation);
    let (_, rec) = recorded_run(formulation, params, grid, config, init)?;
    Ok(rec.time_average(|r| r.curl_l2))
}
