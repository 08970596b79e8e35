//! Path-conservative finite-volume integrator on the collocated grid.
//!
//! Rusanov fluxes at faces, segment-path fluctuations `B(q_mid) (q_R - q_L)`
//! split evenly between the two neighbours, and for MUSCL the in-cell jump
//! `B(q_i) (q_i^+ - q_i^-)`. Time stepping is SSP-RK2 (Heun) wrapped in a
//! Strang splitting with the exact source relaxation.

use crate::error::{Error, Result};
use crate::field::{comp, State, MAX_COMP};
use crate::grid::{Axis, Grid2D};
use crate::models::PdeSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reconstruction {
    FirstOrder,
    MusclMinmod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub t_end: f64,
    pub cfl: f64,
    pub reconstruction: Reconstruction,
    /// Diagnostics cadence in steps.
    pub record_every: usize,
    /// Optional hard cap on the number of steps.
    pub max_steps: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_end: 0.2,
            cfl: 0.45,
            reconstruction: Reconstruction::MusclMinmod,
            record_every: 1,
            max_steps: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl",
                value: self.cfl,
            });
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                value: self.t_end,
            });
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter {
                name: "record_every",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Limited slope of padded cell `(a, b)` along `axis`.
#[inline]
fn slope(state: &State, a: usize, b: usize, axis: Axis, out: &mut [f64; MAX_COMP]) {
    let n = state.ncomp();
    let (lo, hi) = match axis {
        Axis::X => ((a - 1, b), (a + 1, b)),
        Axis::Y => ((a, b - 1), (a, b + 1)),
    };
    let qm = state.padded_cell(lo.0, lo.1);
    let q0 = state.padded_cell(a, b);
    let qp = state.padded_cell(hi.0, hi.1);
    for c in 0..n {
        out[c] = minmod(q0[c] - qm[c], qp[c] - q0[c]);
    }
}

/// Semi-discrete right-hand side (without sources) of the interior cells.
///
/// `state` must have fresh ghosts. Results go into the interior of `rhs`.
pub fn rhs(state: &State, system: &PdeSystem, grid: &Grid2D, recon: Reconstruction, rhs: &mut State) -> Result<()> {
    let n = system.ncomp();
    state.matches(grid, n)?;
    rhs.matches(grid, n)?;
    rhs.as_mut_slice().iter_mut().for_each(|x| *x = 0.0);
    let g = grid.ghost;
    let (nx, ny) = (grid.nx, grid.ny);
    let muscl = recon == Reconstruction::MusclMinmod;

    let mut sl = [0.0; MAX_COMP];
    let mut sr = [0.0; MAX_COMP];
    let mut ql = [0.0; MAX_COMP];
    let mut qr = [0.0; MAX_COMP];
    let mut qm = [0.0; MAX_COMP];
    let mut dq = [0.0; MAX_COMP];
    let mut fl = [0.0; MAX_COMP];
    let mut fr = [0.0; MAX_COMP];
    let mut fluct = [0.0; MAX_COMP];
    let mut face = [0.0; MAX_COMP];

    for axis in Axis::BOTH {
        let h = grid.spacing(axis);
        let inv_h = 1.0 / h;
        let (lines, len) = match axis {
            Axis::X => (ny, nx),
            Axis::Y => (nx, ny),
        };
        for line in 0..lines {
            // Face s sits between interior cells s-1 and s along the line.
            for s in 0..=len {
                let (a_l, b_l, a_r, b_r) = match axis {
                    Axis::X => (g + s - 1, g + line, g + s, g + line),
                    Axis::Y => (g + line, g + s - 1, g + line, g + s),
                };
                let q_left = state.padded_cell(a_l, b_l);
                let q_right = state.padded_cell(a_r, b_r);
                if muscl {
                    slope(state, a_l, b_l, axis, &mut sl);
                    slope(state, a_r, b_r, axis, &mut sr);
                    for c in 0..n {
                        ql[c] = q_left[c] + 0.5 * sl[c];
                        qr[c] = q_right[c] - 0.5 * sr[c];
                    }
                } else {
                    ql[..n].copy_from_slice(q_left);
                    qr[..n].copy_from_slice(q_right);
                }
                for (i, (a, b)) in [(a_l, b_l), (a_r, b_r)].into_iter().enumerate() {
                    let rho = if i == 0 { ql[comp::RHO] } else { qr[comp::RHO] };
                    if !(rho > 0.0) {
                        return Err(Error::PositivityLoss {
                            i: a - g,
                            j: b - g,
                            rho,
                            t: f64::NAN,
                        });
                    }
                }
                system.flux(&ql, axis, &mut fl)?;
                system.flux(&qr, axis, &mut fr)?;
                let speed = system
                    .max_signal_speed(&ql, axis)?
                    .max(system.max_signal_speed(&qr, axis)?);
                for c in 0..n {
                    qm[c] = 0.5 * (ql[c] + qr[c]);
                    dq[c] = qr[c] - ql[c];
                    face[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * speed * dq[c];
                }
                system.noncons_product(&qm, &dq, axis, &mut fluct);

                if s > 0 {
                    let (p, q) = match axis {
                        Axis::X => (s - 1, line),
                        Axis::Y => (line, s - 1),
                    };
                    let out = rhs.cell_mut(p, q);
                    for c in 0..n {
                        out[c] -= (face[c] + 0.5 * fluct[c]) * inv_h;
                    }
                }
                if s < len {
                    let (p, q) = match axis {
                        Axis::X => (s, line),
                        Axis::Y => (line, s),
                    };
                    let out = rhs.cell_mut(p, q);
                    for c in 0..n {
                        out[c] += (face[c] - 0.5 * fluct[c]) * inv_h;
                    }
                }
            }
            if muscl {
                // Jump of the reconstruction inside each cell.
                for s in 0..len {
                    let (p, q) = match axis {
                        Axis::X => (s, line),
                        Axis::Y => (line, s),
                    };
                    slope(state, p + g, q + g, axis, &mut sl);
                    system.noncons_product(state.cell(p, q), &sl, axis, &mut fluct);
                    let out = rhs.cell_mut(p, q);
                    for c in 0..n {
                        out[c] -= fluct[c] * inv_h;
                    }
                }
            }
        }
    }
    Ok(())
}

/// CFL time step `cfl * min(dx, dy) / max speed`.
pub fn stable_dt(state: &State, system: &PdeSystem, grid: &Grid2D, cfl: f64) -> Result<f64> {
    let mut smax: f64 = 0.0;
    for (_, _, q) in state.interior() {
        smax = smax.max(system.max_signal_speed_any(q)?);
    }
    Ok(cfl * grid.min_spacing() / smax)
}

pub(crate) fn check_positivity(state: &State, t: f64) -> Result<()> {
    for (p, q, cell) in state.interior() {
        let rho = cell[comp::RHO];
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::PositivityLoss { i: p, j: q, rho, t });
        }
    }
    Ok(())
}

/// Scratch buffers reused across steps.
#[derive(Debug, Clone)]
pub struct Workspace {
    stage: State,
    rhs: State,
}

impl Workspace {
    pub fn new(grid: &Grid2D, ncomp: usize) -> Self {
        Self {
            stage: State::zeros(grid, ncomp),
            rhs: State::zeros(grid, ncomp),
        }
    }
}

fn relax_all(state: &mut State, system: &PdeSystem, dt: f64) {
    let n = state.ncomp();
    for cell in state.as_mut_slice().chunks_exact_mut(n) {
        system.relax_sources(cell, dt);
    }
}

/// Advances `state` in place by exactly `dt`; `t` is used for error reports.
pub fn advance(
    state: &mut State,
    system: &PdeSystem,
    grid: &Grid2D,
    recon: Reconstruction,
    dt: f64,
    t: f64,
    work: &mut Workspace,
) -> Result<()> {
    let n = system.ncomp();
    state.matches(grid, n)?;
    if work.stage.matches(grid, n).is_err() {
        *work = Workspace::new(grid, n);
    }
    relax_all(state, system, 0.5 * dt);
    state.fill_ghosts();

    // Stage 1: u1 = u + dt L(u)
    rhs(state, system, grid, recon, &mut work.rhs)?;
    work.stage.as_mut_slice().copy_from_slice(state.as_slice());
    for q in 0..grid.ny {
        for p in 0..grid.nx {
            let r = work.rhs.cell(p, q);
            let out = work.stage.cell_mut(p, q);
            for c in 0..n {
                out[c] += dt * r[c];
            }
        }
    }
    check_positivity(&work.stage, t + dt)?;
    work.stage.fill_ghosts();

    // Stage 2: u = (u + u1 + dt L(u1)) / 2
    rhs(&work.stage, system, grid, recon, &mut work.rhs)?;
    for q in 0..grid.ny {
        for p in 0..grid.nx {
            let r = work.rhs.cell(p, q);
            let u1 = work.stage.cell(p, q);
            let o = state.padded_offset(p + grid.ghost, q + grid.ghost);
            let out = &mut state.as_mut_slice()[o..o + n];
            for c in 0..n {
                out[c] = 0.5 * (out[c] + u1[c] + dt * r[c]);
            }
        }
    }
    check_positivity(state, t + dt)?;
    relax_all(state, system, 0.5 * dt);
    state.fill_ghosts();
    Ok(())
}

/// One CFL-limited step; returns the new state and the step size.
pub fn step(state: &State, system: &PdeSystem, grid: &Grid2D, config: &SolverConfig) -> Result<(State, f64)> {
    let dt = stable_dt(state, system, grid, config.cfl)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::TimeStepUnderflow { t: 0.0, dt });
    }
    let mut next = state.clone();
    let mut work = Workspace::new(grid, system.ncomp());
    advance(&mut next, system, grid, config.reconstruction, dt, 0.0, &mut work)?;
    Ok((next, dt))
}

/// Smallest admissible step relative to the final time.
pub(crate) const DT_FLOOR: f64 = 1e-14;

/// Advances to `config.t_end` (last step clipped), calling `observer` at
/// `t = 0`, every `record_every` steps and at the final time.
pub fn run(
    initial: &State,
    system: &PdeSystem,
    grid: &Grid2D,
    config: &SolverConfig,
    observer: &mut dyn FnMut(f64, &State) -> Result<()>,
) -> Result<State> {
    config.validate()?;
    let mut state = initial.clone();
    state.fill_ghosts();
    let mut work = Workspace::new(grid, system.ncomp());
    let mut t = 0.0;
    let mut steps = 0usize;
    observer(t, &state)?;
    let mut last_recorded = 0usize;
    while t < config.t_end && config.max_steps.is_none_or(|m| steps < m) {
        let mut dt = stable_dt(&state, system, grid, config.cfl)?;
        if !(dt > DT_FLOOR * config.t_end.max(1.0)) || !dt.is_finite() {
            return Err(Error::TimeStepUnderflow { t, dt });
        }
        let last = t + dt >= config.t_end;
        if last {
            dt = config.t_end - t;
        }
        advance(&mut state, system, grid, config.reconstruction, dt, t, &mut work)?;
        t = if last { config.t_end } else { t + dt };
        steps += 1;
        if steps.is_multiple_of(config.record_every) {
            observer(t, &state)?;
            last_recorded = steps;
        }
    }
    if steps > 0 && last_recorded != steps {
        observer(t, &state)?;
    }
    Ok(state)
}
