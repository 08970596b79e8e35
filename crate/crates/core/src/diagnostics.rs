//! Constraint norms, conserved totals, initial conditions and recording.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, exp, sin, sqrt};

use crate::energy::{energy_density, Conserved};
use crate::error::{Error, Result};
use crate::field::{comp, State};
use crate::grid::Grid2D;
use crate::params::{Formulation, ModelParams};
use crate::simulation::Solution;
use crate::staggered::{corner_gradient, discrete_curl, CenterScalar, StaggeredJ, StaggeredState};

/// Volume-weighted norms of a cell-centered error field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl Norms {
    fn of(values: impl Iterator<Item = f64>, volume: f64) -> Self {
        let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
        for v in values {
            let a = v.abs();
            l1 += a;
            l2 += a * a;
            linf = linf.max(a);
        }
        Norms {
            l1: l1 * volume,
            l2: sqrt(l2 * volume),
            linf,
        }
    }
}

/// Central-difference curl magnitude of the cell-centered `J` in `state`.
///
/// With `d_3 = 0` the curl is `(d_2 J_3, -d_1 J_3, d_1 J_2 - d_2 J_1)`.
/// `state` must have fresh ghosts.
pub fn collocated_curl_error(state: &State, grid: &Grid2D) -> Norms {
    let g = grid.ghost;
    let (hx, hy) = (0.5 / grid.dx, 0.5 / grid.dy);
    let values = (0..grid.ny).flat_map(move |q| {
        (0..grid.nx).map(move |p| {
            let (a, b) = (p + g, q + g);
            let e = state.padded_cell(a + 1, b);
            let w = state.padded_cell(a - 1, b);
            let n = state.padded_cell(a, b + 1);
            let s = state.padded_cell(a, b - 1);
            let j = comp::J;
            let cz = hx * (e[j + 1] - w[j + 1]) - hy * (n[j] - s[j]);
            let cx = hy * (n[j + 2] - s[j + 2]);
            let cy = -hx * (e[j + 2] - w[j + 2]);
            sqrt(cx * cx + cy * cy + cz * cz)
        })
    });
    Norms::of(values, grid.cell_volume())
}

/// Norms of the trapezoidal curl of a vertex field.
pub fn staggered_curl_error(j: &StaggeredJ, grid: &Grid2D) -> Norms {
    let curl = discrete_curl(j, grid);
    Norms::of(curl.values.iter().copied(), grid.cell_volume())
}

pub fn curl_error(solution: &Solution, grid: &Grid2D) -> Norms {
    match solution {
        Solution::Collocated(s) => collocated_curl_error(s, grid),
        Solution::Staggered(s) => staggered_curl_error(&s.j, grid),
    }
}

/// L2 norm of the central-difference `d_m psi_m` (GLM states only).
pub fn divergence_psi_l2(state: &State, grid: &Grid2D) -> f64 {
    let g = grid.ghost;
    let (hx, hy) = (0.5 / grid.dx, 0.5 / grid.dy);
    let values = (0..grid.ny).flat_map(move |q| {
        (0..grid.nx).map(move |p| {
            let (a, b) = (p + g, q + g);
            let psi = comp::PSI;
            hx * (state.padded_cell(a + 1, b)[psi] - state.padded_cell(a - 1, b)[psi])
                + hy * (state.padded_cell(a, b + 1)[psi + 1] - state.padded_cell(a, b - 1)[psi + 1])
        })
    });
    Norms::of(values, grid.cell_volume()).l2
}

/// Domain integrals of mass, momentum and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Totals {
    pub mass: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
}

/// Totals of a collocated view (at least seven components).
pub fn totals(view: &State, grid: &Grid2D, params: &ModelParams) -> Result<Totals> {
    let mut t = Totals {
        mass: 0.0,
        momentum: [0.0; 3],
        energy: 0.0,
    };
    for (_, _, c) in view.interior() {
        t.mass += c[comp::RHO];
        for k in 0..3 {
            t.momentum[k] += c[comp::MOM + k];
        }
        t.energy += energy_density(&Conserved::from_slice(c), params)?;
    }
    let vol = grid.cell_volume();
    t.mass *= vol;
    t.energy *= vol;
    t.momentum.iter_mut().for_each(|m| *m *= vol);
    Ok(t)
}

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub curl_l1: f64,
    pub curl_l2: f64,
    pub curl_linf: f64,
    /// Only populated for the GLM formulation.
    pub divpsi_l2: Option<f64>,
    pub total_mass: f64,
    pub total_momentum: [f64; 3],
    pub total_energy: f64,
}

/// Evaluates a record without storing it.
pub fn measure(
    t: f64,
    solution: &Solution,
    grid: &Grid2D,
    params: &ModelParams,
    formulation: Formulation,
) -> Result<DiagnosticsRecord> {
    let curl = curl_error(solution, grid);
    let view = solution.collocated_view(grid);
    let tot = totals(&view, grid, params)?;
    let divpsi_l2 = match (formulation, solution) {
        (Formulation::Glm, Solution::Collocated(s)) => Some(divergence_psi_l2(s, grid)),
        _ => None,
    };
    Ok(DiagnosticsRecord {
        t,
        curl_l1: curl.l1,
        curl_l2: curl.l2,
        curl_linf: curl.linf,
        divpsi_l2,
        total_mass: tot.mass,
        total_momentum: tot.momentum,
        total_energy: tot.energy,
    })
}

/// Append-only diagnostics time series.
#[derive(Debug, Clone)]
pub struct Recorder {
    pub formulation: Formulation,
    pub params: ModelParams,
    pub grid: Grid2D,
    pub records: Vec<DiagnosticsRecord>,
}

impl Recorder {
    pub fn new(formulation: Formulation, params: ModelParams, grid: Grid2D) -> Self {
        Self {
            formulation,
            params,
            grid,
            records: Vec::new(),
        }
    }

    pub fn record(&mut self, t: f64, solution: &Solution) -> Result<&DiagnosticsRecord> {
        if let Some(last) = self.records.last() {
            if !(t > last.t) {
                return Err(Error::NonMonotoneTime { last: last.t, t });
            }
        }
        let rec = measure(t, solution, &self.grid, &self.params, self.formulation)?;
        self.records.push(rec);
        Ok(self.records.last().unwrap())
    }

    /// Trapezoidal time average of `field` over the recorded interval.
    pub fn time_average(&self, field: impl Fn(&DiagnosticsRecord) -> f64) -> f64 {
        time_average(&self.records, field)
    }
}

pub fn time_average(records: &[DiagnosticsRecord], field: impl Fn(&DiagnosticsRecord) -> f64) -> f64 {
    match records {
        [] => 0.0,
        [only] => field(only),
        _ => {
            let span = records[records.len() - 1].t - records[0].t;
            let integral: f64 = records
                .windows(2)
                .map(|w| 0.5 * (field(&w[0]) + field(&w[1])) * (w[1].t - w[0].t))
                .sum();
            integral / span
        }
    }
}

/// Initial conditions shipped with the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// Gaussian density bump in rigid rotation with `J = grad theta`.
    Vortex,
    /// As `Vortex` but with a smooth periodic velocity field.
    PeriodicVortex,
    /// 1D density wave along x, `J = 0`.
    DensityWave,
}

impl InitialCondition {
    pub fn name(self) -> &'static str {
        match self {
            InitialCondition::Vortex => "vortex",
            InitialCondition::PeriodicVortex => "periodic_vortex",
            InitialCondition::DensityWave => "density_wave",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::Vortex, Self::PeriodicVortex, Self::DensityWave]
            .into_iter()
            .find(|ic| ic.name() == name)
    }
}

/// `theta = 0.1 sin(2 pi x) sin(2 pi y)`, the potential of the vortex `J`.
pub fn vortex_potential(x: f64, y: f64) -> f64 {
    0.1 * sin(2.0 * PI * x) * sin(2.0 * PI * y)
}

fn vortex_potential_gradient(x: f64, y: f64) -> (f64, f64) {
    let k = 2.0 * PI;
    (0.1 * k * cos(k * x) * sin(k * y), 0.1 * k * sin(k * x) * cos(k * y))
}

fn vortex_density(x: f64, y: f64) -> f64 {
    let r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    1.0 + 0.1 * exp(-50.0 * r2)
}

/// Builds one of the shipped initial conditions.
pub fn initial_condition(ic: InitialCondition, grid: &Grid2D, formulation: Formulation) -> Solution {
    let velocity = move |x: f64, y: f64| -> [f64; 3] {
        match ic {
            InitialCondition::Vortex => [-0.1 * (y - 0.5), 0.1 * (x - 0.5), 0.0],
            InitialCondition::PeriodicVortex => {
                let k = 2.0 * PI;
                [-0.1 * sin(k * (y - 0.5)) / k, 0.1 * sin(k * (x - 0.5)) / k, 0.0]
            }
            InitialCondition::DensityWave => [1.0, 0.0, 0.0],
        }
    };
    let density = move |x: f64, y: f64| match ic {
        InitialCondition::DensityWave => 1.0 + 0.1 * sin(2.0 * PI * x),
        _ => vortex_density(x, y),
    };
    let has_j = ic != InitialCondition::DensityWave;
    let fill_fluid = |x: f64, y: f64, out: &mut [f64]| {
        let rho = density(x, y);
        let v = velocity(x, y);
        out[comp::RHO] = rho;
        for k in 0..3 {
            out[comp::MOM + k] = rho * v[k];
        }
    };

    match formulation {
        Formulation::CurlFree => {
            let cells = State::from_fn(grid, 4, |p, q, out| {
                let (x, y) = grid.cell_center(p, q);
                fill_fluid(x, y, out);
            });
            let j = if has_j {
                let theta = CenterScalar::from_fn(grid, |p, q| {
                    let (x, y) = grid.cell_center(p, q);
                    vortex_potential(x, y)
                });
                corner_gradient(&theta, grid)
            } else {
                StaggeredJ::zeros(grid)
            };
            Solution::Staggered(StaggeredState { cells, j })
        }
        f => Solution::Collocated(State::from_fn(grid, f.ncomp(), |p, q, out| {
            let (x, y) = grid.cell_center(p, q);
            fill_fluid(x, y, out);
            if has_j {
                let (j1, j2) = vortex_potential_gradient(x, y);
                out[comp::J] = j1;
                out[comp::J + 1] = j2;
            }
        })),
    }
}

/// Gaussian bump in rigid rotation on the unit square, `J = grad theta`.
///
/// Collocated formulations sample the analytic gradient at cell centers;
/// the staggered formulation takes the corner gradient of `theta` so the
/// initial discrete curl vanishes to round-off.
pub fn standard_vortex_ic(grid: &Grid2D, params: &ModelParams, formulation: Formulation) -> Result<Solution> {
    params.validate(formulation)?;
    Ok(initial_condition(InitialCondition::Vortex, grid, formulation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_j_has_zero_curl() {
        let g = Grid2D::unit_square(8, 8).unwrap();
        let s = State::from_fn(&g, 7, |_, _, q| {
            q[0] = 1.0;
            q[4] = 0.4;
            q[5] = -0.7;
            q[6] = 0.2;
        });
        assert_eq!(collocated_curl_error(&s, &g), Norms::default());
    }

    #[test]
    fn rigid_rotation_has_curl_two() {
        // J = (-y, x). Central differences are exact on linear fields, so in
        // any cell whose stencil stays off the periodic seam the curl is
        // ((x + dx) - (x - dx)) / 2dx + ((y + dy) - (y - dy)) / 2dy = 2.
        let g = Grid2D::new(8, 8, 0.1, 0.1, -0.4, -0.4, 2).unwrap();
        let s = State::from_fn(&g, 7, |p, q, c| {
            let (x, y) = g.cell_center(p, q);
            c[0] = 1.0;
            c[4] = -y;
            c[5] = x;
        });
        let gh = g.ghost;
        for q in 1..7 {
            for p in 1..7 {
                let (a, b) = (p + gh, q + gh);
                let d2 = (s.padded_cell(a + 1, b)[5] - s.padded_cell(a - 1, b)[5]) / (2.0 * g.dx);
                let d1 = (s.padded_cell(a, b + 1)[4] - s.padded_cell(a, b - 1)[4]) / (2.0 * g.dy);
                assert!((d2 - d1 - 2.0).abs() < 1e-12);
            }
        }
        // Seam cells only add larger jumps, so the max norm is at least 2.
        assert!(collocated_curl_error(&s, &g).linf >= 2.0 - 1e-12);
    }

    #[test]
    fn recorder_rejects_time_going_backwards() {
        let g = Grid2D::unit_square(8, 8).unwrap();
        let p = ModelParams::default();
        let sol = standard_vortex_ic(&g, &p, Formulation::Original).unwrap();
        let mut r = Recorder::new(Formulation::Original, p, g);
        r.record(0.0, &sol).unwrap();
        r.record(0.1, &sol).unwrap();
        assert!(matches!(r.record(0.1, &sol), Err(Error::NonMonotoneTime { .. })));
        assert!(r.record(0.05, &sol).is_err());
        assert_eq!(r.records.len(), 2);
    }

    #[test]
    fn measuring_twice_is_deterministic() {
        let g = Grid2D::unit_square(16, 16).unwrap();
        let p = ModelParams::default();
        for f in Formulation::ALL {
            let sol = standard_vortex_ic(&g, &p, f).unwrap();
            assert_eq!(
                measure(0.0, &sol, &g, &p, f).unwrap(),
                measure(0.0, &sol, &g, &p, f).unwrap()
            );
        }
    }

    #[test]
    fn glm_divergence_starts_at_zero() {
        let g = Grid2D::unit_square(16, 16).unwrap();
        let p = ModelParams::default();
        let sol = standard_vortex_ic(&g, &p, Formulation::Glm).unwrap();
        let rec = measure(0.0, &sol, &g, &p, Formulation::Glm).unwrap();
        assert_eq!(rec.divpsi_l2, Some(0.0));
        let rec = measure(
            0.0,
            &standard_vortex_ic(&g, &p, Formulation::Original).unwrap(),
            &g,
            &p,
            Formulation::Original,
        )
        .unwrap();
        assert_eq!(rec.divpsi_l2, None);
    }

    #[test]
    fn trapezoidal_average() {
        let mk = |t: f64, v: f64| DiagnosticsRecord {
            t,
            curl_l1: 0.0,
            curl_l2: v,
            curl_linf: 0.0,
            divpsi_l2: None,
            total_mass: 0.0,
            total_momentum: [0.0; 3],
            total_energy: 0.0,
        };
        let recs = [mk(0.0, 0.0), mk(1.0, 2.0), mk(3.0, 2.0)];
        assert!((time_average(&recs, |r| r.curl_l2) - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(time_average(&recs[..1], |r| r.curl_l2), 0.0);
    }
}
