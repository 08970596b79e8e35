//! Exactly curl-free staggered discretization.
//!
//! `J` lives on vertices, `phi = v . J` at cell centers. The vertex field is
//! changed only by the corner gradient of `phi`, and the trapezoidal
//! (Stokes) curl annihilates every corner gradient, so the discrete curl is
//! frozen at its initial value. Density and momentum use the collocated
//! Rusanov scheme with `J` averaged from the four corners of each cell.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{comp, State};
use crate::fv::{self, Reconstruction, SolverConfig};
use crate::grid::Grid2D;
use crate::models::{original_system, PdeSystem};
use crate::params::ModelParams;

/// Scaled curl above which initial data is rejected.
pub const CURL_FREE_TOLERANCE: f64 = 1e-12;

/// In-plane vertex vector field with periodic closure.
///
/// Arrays are `(nx + 1) x (ny + 1)`, x fastest; index `(a, b)` is the vertex
/// at `(x0 + a dx, y0 + b dy)`. Row/column `0` duplicates row/column `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredJ {
    nx: usize,
    ny: usize,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
}

impl StaggeredJ {
    pub fn zeros(grid: &Grid2D) -> Self {
        let len = (grid.nx + 1) * (grid.ny + 1);
        Self {
            nx: grid.nx,
            ny: grid.ny,
            j1: vec![0.0; len],
            j2: vec![0.0; len],
        }
    }

    /// Samples `f(x, y) -> (J1, J2)` on the vertices `0..nx` x `0..ny` and
    /// closes periodically.
    pub fn from_fn(grid: &Grid2D, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Self {
        let mut s = Self::zeros(grid);
        for b in 0..grid.ny {
            for a in 0..grid.nx {
                let (x, y) = grid.vertex(a, b);
                let (u, v) = f(x, y);
                let i = s.index(a, b);
                s.j1[i] = u;
                s.j2[i] = v;
            }
        }
        s.close_periodic();
        s
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        b * (self.nx + 1) + a
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> (f64, f64) {
        let i = self.index(a, b);
        (self.j1[i], self.j2[i])
    }

    /// Copies the first row/column onto the closing row/column.
    pub fn close_periodic(&mut self) {
        let (nx, ny) = (self.nx, self.ny);
        for b in 0..ny {
            let (src, dst) = (self.index(0, b), self.index(nx, b));
            self.j1[dst] = self.j1[src];
            self.j2[dst] = self.j2[src];
        }
        for a in 0..=nx {
            let (src, dst) = (self.index(a, 0), self.index(a, ny));
            self.j1[dst] = self.j1[src];
            self.j2[dst] = self.j2[src];
        }
    }

    pub fn is_closed(&self) -> bool {
        (0..=self.ny).all(|b| self.get(0, b) == self.get(self.nx, b))
            && (0..=self.nx).all(|a| self.get(a, 0) == self.get(a, self.ny))
    }

    /// Largest vertex magnitude `max(|J1|, |J2|)`.
    pub fn max_abs(&self) -> f64 {
        self.j1.iter().chain(self.j2.iter()).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Four-corner average of cell `(p, q)`.
    #[inline]
    pub fn cell_average(&self, p: usize, q: usize) -> (f64, f64) {
        let i00 = self.index(p, q);
        let i10 = self.index(p + 1, q);
        let i01 = self.index(p, q + 1);
        let i11 = self.index(p + 1, q + 1);
        (
            0.25 * (self.j1[i00] + self.j1[i10] + self.j1[i01] + self.j1[i11]),
            0.25 * (self.j2[i00] + self.j2[i10] + self.j2[i01] + self.j2[i11]),
        )
    }

    /// `self += alpha * other` on every vertex.
    pub fn axpy(&mut self, alpha: f64, other: &StaggeredJ) {
        for (a, b) in self.j1.iter_mut().zip(&other.j1) {
            *a += alpha * b;
        }
        for (a, b) in self.j2.iter_mut().zip(&other.j2) {
            *a += alpha * b;
        }
    }
}

/// Cell-centered scalar, `nx x ny`, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterScalar {
    nx: usize,
    ny: usize,
    pub values: Vec<f64>,
}

impl CenterScalar {
    pub fn zeros(grid: &Grid2D) -> Self {
        Self {
            nx: grid.nx,
            ny: grid.ny,
            values: vec![0.0; grid.cells()],
        }
    }

    pub fn from_fn(grid: &Grid2D, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = Self::zeros(grid);
        for q in 0..grid.ny {
            for p in 0..grid.nx {
                s.values[q * grid.nx + p] = f(p, q);
            }
        }
        s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[q * self.nx + p]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// z-component of the trapezoidal-rule curl on each cell.
pub fn discrete_curl(j: &StaggeredJ, grid: &Grid2D) -> CenterScalar {
    let mut out = CenterScalar::zeros(grid);
    let hx = 0.5 / grid.dx;
    let hy = 0.5 / grid.dy;
    for q in 0..grid.ny {
        for p in 0..grid.nx {
            // corners: (p+1/2, q+1/2) -> (p+1, q+1), (p-1/2, q-1/2) -> (p, q)
            let (a1, a2) = j.get(p + 1, q + 1);
            let (b1, b2) = j.get(p + 1, q);
            let (c1, c2) = j.get(p, q + 1);
            let (d1, d2) = j.get(p, q);
            out.values[q * grid.nx + p] = hx * (a2 + b2 - c2 - d2) - hy * (a1 + c1 - b1 - d1);
        }
    }
    out
}

/// Corner gradient of a cell-centered scalar, one vector per vertex.
pub fn corner_gradient(phi: &CenterScalar, grid: &Grid2D) -> StaggeredJ {
    let mut out = StaggeredJ::zeros(grid);
    let hx = 0.5 / grid.dx;
    let hy = 0.5 / grid.dy;
    for b in 0..grid.ny {
        // Vertex (a, b) is the corner between cells a-1, a and b-1, b.
        let q1 = b;
        let q0 = grid.wrap_y(b as isize - 1);
        for a in 0..grid.nx {
            let p1 = a;
            let p0 = grid.wrap_x(a as isize - 1);
            let f11 = phi.get(p1, q1);
            let f10 = phi.get(p1, q0);
            let f01 = phi.get(p0, q1);
            let f00 = phi.get(p0, q0);
            let i = out.index(a, b);
            out.j1[i] = hx * (f11 + f10 - f01 - f00);
            out.j2[i] = hy * (f11 + f01 - f10 - f00);
        }
    }
    out.close_periodic();
    out
}

/// `max |curl| / max(max|J| / min(dx, dy), 1)`.
pub fn scaled_curl(j: &StaggeredJ, grid: &Grid2D) -> f64 {
    let curl = discrete_curl(j, grid).max_abs();
    curl / (j.max_abs() / grid.min_spacing()).max(1.0)
}

/// Density and momentum at centers plus the vertex `J` field.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredState {
    /// `(rho, m1, m2, m3)` with ghost layers.
    pub cells: State,
    pub j: StaggeredJ,
}

impl StaggeredState {
    /// Collocated seven-component view with `J` averaged to centers, `J3 = 0`.
    pub fn collocated(&self, grid: &Grid2D) -> State {
        State::from_fn(grid, 7, |p, q, out| {
            out[..4].copy_from_slice(self.cells.cell(p, q));
            let (j1, j2) = self.j.cell_average(p, q);
            out[comp::J] = j1;
            out[comp::J + 1] = j2;
            out[comp::J + 2] = 0.0;
        })
    }
}

/// `phi = v . J` at cell centers from a collocated seven-component state.
pub fn center_potential(view: &State, grid: &Grid2D) -> CenterScalar {
    CenterScalar::from_fn(grid, |p, q| {
        let c = view.cell(p, q);
        let rho = c[comp::RHO];
        (c[comp::MOM] * c[comp::J] + c[comp::MOM + 1] * c[comp::J + 1] + c[comp::MOM + 2] * c[comp::J + 2]) / rho
    })
}

/// Evaluates the stage derivative: `(d(rho, m)/dt, dJ/dt)`.
fn stage_rhs(
    state: &StaggeredState,
    system: &PdeSystem,
    grid: &Grid2D,
    recon: Reconstruction,
    view_rhs: &mut State,
) -> Result<StaggeredJ> {
    let view = state.collocated(grid);
    fv::rhs(&view, system, grid, recon, view_rhs)?;
    let phi = center_potential(&view, grid);
    let mut dj = corner_gradient(&phi, grid);
    for x in dj.j1.iter_mut().chain(dj.j2.iter_mut()) {
        *x = -*x;
    }
    Ok(dj)
}

/// Largest stable step from the original-system speeds of the averaged view.
pub fn stable_dt(state: &StaggeredState, system: &PdeSystem, grid: &Grid2D, cfl: f64) -> Result<f64> {
    fv::stable_dt(&state.collocated(grid), system, grid, cfl)
}

pub fn check_curl_free(j: &StaggeredJ, grid: &Grid2D) -> Result<()> {
    let scaled = scaled_curl(j, grid);
    if scaled <= CURL_FREE_TOLERANCE {
        Ok(())
    } else {
        Err(Error::ConstraintViolation { scaled_curl: scaled })
    }
}

/// Advances by exactly `dt` with SSP-RK2.
pub fn advance(
    state: &mut StaggeredState,
    system: &PdeSystem,
    grid: &Grid2D,
    recon: Reconstruction,
    dt: f64,
    t: f64,
) -> Result<()> {
    let mut view_rhs = State::zeros(grid, 7);
    let n = 4;

    let dj = stage_rhs(state, system, grid, recon, &mut view_rhs)?;
    let mut stage = state.clone();
    for q in 0..grid.ny {
        for p in 0..grid.nx {
            let r = view_rhs.cell(p, q);
            let out = stage.cells.cell_mut(p, q);
            for c in 0..n {
                out[c] += dt * r[c];
            }
        }
    }
    stage.j.axpy(dt, &dj);
    fv::check_positivity(&stage.cells, t + dt)?;
    stage.cells.fill_ghosts();

    let dj1 = stage_rhs(&stage, system, grid, recon, &mut view_rhs)?;
    for q in 0..grid.ny {
        for p in 0..grid.nx {
            let r = view_rhs.cell(p, q);
            let u1 = stage.cells.cell(p, q);
            let out = state.cells.cell_mut(p, q);
            for c in 0..n {
                out[c] = 0.5 * (out[c] + u1[c] + dt * r[c]);
            }
        }
    }
    // J <- (J + J1 + dt dJ1) / 2, a combination of J and corner gradients.
    for (i, v) in state.j.j1.iter_mut().enumerate() {
        *v = 0.5 * (*v + stage.j.j1[i] + dt * dj1.j1[i]);
    }
    for (i, v) in state.j.j2.iter_mut().enumerate() {
        *v = 0.5 * (*v + stage.j.j2[i] + dt * dj1.j2[i]);
    }
    fv::check_positivity(&state.cells, t + dt)?;
    state.cells.fill_ghosts();
    Ok(())
}

/// One CFL-limited curl-free step. Rejects data with a nonzero discrete curl.
pub fn curlfree_step(
    state: &StaggeredState,
    grid: &Grid2D,
    params: &ModelParams,
    config: &SolverConfig,
) -> Result<(StaggeredState, f64)> {
    check_curl_free(&state.j, grid)?;
    let system = original_system(*params)?;
    let dt = stable_dt(state, &system, grid, config.cfl)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::TimeStepUnderflow { t: 0.0, dt });
    }
    let mut next = state.clone();
    advance(&mut next, &system, grid, config.reconstruction, dt, 0.0)?;
    Ok((next, dt))
}
