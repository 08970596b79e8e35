//! Finite-volume kernels for a model hyperbolic system with a curl
//! involution: density, momentum and a vector field `J` whose curl must
//! stay zero.
//!
//! Four formulations share one energy potential:
//!
//! - [`Formulation::Original`]: the plain system, weakly hyperbolic;
//! - [`Formulation::GodunovPowell`]: symmetrized with a multiple of the curl;
//! - [`Formulation::Glm`]: augmented with a Maxwell-type cleaning subsystem;
//! - [`Formulation::CurlFree`]: staggered `J` updated by a compatible corner
//!   gradient, so the discrete curl is preserved to round-off.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod field;
pub mod fv;
pub mod grid;
pub mod models;
pub mod params;
pub mod simulation;
pub mod staggered;

pub use error::{Error, Result};
pub use field::State;
pub use fv::{Reconstruction, SolverConfig};
pub use grid::{Axis, Grid2D};
pub use models::PdeSystem;
pub use params::{Formulation, ModelParams};
pub use simulation::{Simulation, Solution};
pub use staggered::{CenterScalar, StaggeredJ, StaggeredState};
