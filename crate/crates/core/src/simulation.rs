use crate::error::{Error, Result};
use crate::field::State;
use crate::fv::{self, SolverConfig, Workspace, DT_FLOOR};
use crate::grid::Grid2D;
use crate::models::PdeSystem;
use crate::params::{Formulation, ModelParams};
use crate::staggered::{self, StaggeredState};

/// Solution fields of any formulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Collocated(State),
    Staggered(StaggeredState),
}

impl Solution {
    /// Seven- or eleven-component collocated view (`J` averaged to centers
    /// for the staggered scheme).
    pub fn collocated_view(&self, grid: &Grid2D) -> State {
        match self {
            Solution::Collocated(s) => s.clone(),
            Solution::Staggered(s) => s.collocated(grid),
        }
    }
}

/// Time loop over one formulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    formulation: Formulation,
    grid: Grid2D,
    config: SolverConfig,
    system: PdeSystem,
    solution: Solution,
    work: Workspace,
    t: f64,
    steps: usize,
}

impl Simulation {
    pub fn new(
        formulation: Formulation,
        params: ModelParams,
        grid: Grid2D,
        config: SolverConfig,
        initial: Solution,
    ) -> Result<Self> {
        params.validate(formulation)?;
        config.validate()?;
        let system = PdeSystem::for_formulation(
            formulation,
            ModelParams {
                cfl: config.cfl,
                ..params
            },
        )?;
        match (&initial, formulation) {
            (Solution::Staggered(s), Formulation::CurlFree) => {
                s.cells.matches(&grid, 4)?;
                if s.j.dims() != (grid.nx, grid.ny) {
                    return Err(Error::InvalidGrid("vertex field does not match grid"));
                }
                staggered::check_curl_free(&s.j, &grid)?;
            }
            (Solution::Collocated(s), f) if f != Formulation::CurlFree => s.matches(&grid, f.ncomp())?,
            (Solution::Collocated(s), _) => {
                return Err(Error::LayoutMismatch {
                    expected: 0,
                    found: s.as_slice().len(),
                });
            }
            (Solution::Staggered(_), f) => {
                return Err(Error::LayoutMismatch {
                    expected: f.ncomp(),
                    found: 4,
                });
            }
        }
        let mut solution = initial;
        if let Solution::Collocated(s) = &mut solution {
            s.fill_ghosts();
        }
        if let Solution::Staggered(s) = &mut solution {
            s.cells.fill_ghosts();
        }
        let work = Workspace::new(&grid, system.ncomp());
        Ok(Self {
            formulation,
            grid,
            config,
            system,
            solution,
            work,
            t: 0.0,
            steps: 0,
        })
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.system.params
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn into_solution(self) -> Solution {
        self.solution
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn stable_dt(&self) -> Result<f64> {
        match &self.solution {
            Solution::Collocated(s) => fv::stable_dt(s, &self.system, &self.grid, self.config.cfl),
            Solution::Staggered(s) => staggered::stable_dt(s, &self.system, &self.grid, self.config.cfl),
        }
    }

    /// Advances by exactly `dt`.
    pub fn advance(&mut self, dt: f64) -> Result<()> {
        let recon = self.config.reconstruction;
        match &mut self.solution {
            Solution::Collocated(s) => fv::advance(s, &self.system, &self.grid, recon, dt, self.t, &mut self.work)?,
            Solution::Staggered(s) => staggered::advance(s, &self.system, &self.grid, recon, dt, self.t)?,
        }
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    /// One CFL step, clipped so that `t` does not pass `t_end`. Returns `dt`.
    pub fn step(&mut self) -> Result<f64> {
        self.step_to(self.config.t_end)
    }

    /// One CFL step clipped to land exactly on `limit` (and never past
    /// `t_end`).
    pub fn step_to(&mut self, limit: f64) -> Result<f64> {
        let limit = limit.min(self.config.t_end);
        if !(limit > self.t) {
            return Ok(0.0);
        }
        let mut dt = self.stable_dt()?;
        if !(dt.is_finite() && dt > DT_FLOOR * self.config.t_end.max(1.0)) {
            return Err(Error::TimeStepUnderflow { t: self.t, dt });
        }
        let remaining = limit - self.t;
        let last = dt >= remaining;
        if last {
            dt = remaining;
        }
        self.advance(dt)?;
        if last {
            self.t = limit;
        }
        Ok(dt)
    }

    /// Runs to `t_end` (or `max_steps`), calling `observer` at the start,
    /// every `record_every` steps and at the end.
    pub fn run(&mut self, observer: &mut dyn FnMut(f64, &Solution) -> Result<()>) -> Result<()> {
        observer(self.t, &self.solution)?;
        let mut last_recorded = self.steps;
        while self.t < self.config.t_end && self.config.max_steps.is_none_or(|m| self.steps < m) {
            self.step()?;
            if self.steps.is_multiple_of(self.config.record_every) {
                observer(self.t, &self.solution)?;
                last_recorded = self.steps;
            }
        }
        if last_recorded != self.steps {
            observer(self.t, &self.solution)?;
        }
        Ok(())
    }
}
