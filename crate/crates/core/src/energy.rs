//! Energy potential, pressure and the thermodynamic dual variables.
//!
//! The specific total energy is
//!
//! ```text
//! E(rho, v, J) = |v|^2 / 2 + k0 rho^(gamma-1) / (gamma-1) + c0^2 |J|^2 / 2
//! ```
//!
//! Conserved variables are `q = (rho, m = rho v, J)` and the energy density
//! `rho E` is treated as a function of `q`. Its gradient gives the dual
//! variables `p = (r, v, eta)` and the Legendre transform
//! `L(p) = q . p - rho E(q)` satisfies `dL/dp = q` wherever the Hessian of
//! `rho E` is positive definite, i.e. where `c_s^2 > c0^2 |J|^2`.

use libm::{pow, sqrt};

use crate::error::{Error, Result};
use crate::params::ModelParams;

#[inline]
fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn admissible(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveDensity { rho })
    }
}

/// Internal energy density `rho e(rho) = k0 rho^gamma / (gamma - 1)`.
#[inline]
fn internal_energy_density(rho: f64, params: &ModelParams) -> f64 {
    params.k0 * pow(rho, params.gamma) / (params.gamma - 1.0)
}

/// Energy density `rho E` from density, velocity and `J`.
pub fn total_energy(rho: f64, v: &[f64; 3], j: &[f64; 3], params: &ModelParams) -> Result<f64> {
    admissible(rho)?;
    Ok(0.5 * rho * dot3(v, v) + internal_energy_density(rho, params) + 0.5 * rho * params.c0 * params.c0 * dot3(j, j))
}

/// Energy density `rho E` from conserved variables `(rho, m, J)`.
pub fn energy_density(q: &Conserved, params: &ModelParams) -> Result<f64> {
    admissible(q.rho)?;
    Ok(0.5 * dot3(&q.m, &q.m) / q.rho
        + internal_energy_density(q.rho, params)
        + 0.5 * q.rho * params.c0 * params.c0 * dot3(&q.j, &q.j))
}

/// Fluid pressure `rho^2 dE/drho = k0 rho^gamma`.
pub fn pressure(rho: f64, params: &ModelParams) -> Result<f64> {
    admissible(rho)?;
    Ok(params.k0 * pow(rho, params.gamma))
}

/// Isentropic sound speed `sqrt(gamma k0 rho^(gamma-1))`.
pub fn sound_speed(rho: f64, params: &ModelParams) -> Result<f64> {
    admissible(rho)?;
    Ok(sqrt(params.gamma * params.k0 * pow(rho, params.gamma - 1.0)))
}

/// `c_s^2 - c0^2 |J|^2`. Positive exactly where `rho E` is strictly convex.
pub fn convexity_margin(rho: f64, j: &[f64; 3], params: &ModelParams) -> Result<f64> {
    let cs = sound_speed(rho, params)?;
    Ok(cs * cs - params.c0 * params.c0 * dot3(j, j))
}

/// The `(rho, m, J)` part of a cell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    pub rho: f64,
    pub m: [f64; 3],
    pub j: [f64; 3],
}

impl Conserved {
    /// Reads the leading seven components of a cell vector.
    pub fn from_slice(q: &[f64]) -> Self {
        Self {
            rho: q[0],
            m: [q[1], q[2], q[3]],
            j: [q[4], q[5], q[6]],
        }
    }

    pub fn velocity(&self) -> [f64; 3] {
        [self.m[0] / self.rho, self.m[1] / self.rho, self.m[2] / self.rho]
    }
}

/// Gradient of `rho E` with respect to `(rho, m, J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualVariables {
    pub r: f64,
    pub v: [f64; 3],
    pub eta: [f64; 3],
}

pub fn dual_variables(q: &Conserved, params: &ModelParams) -> Result<DualVariables> {
    admissible(q.rho)?;
    let c2 = params.c0 * params.c0;
    let v = q.velocity();
    let r = -0.5 * dot3(&v, &v)
        + params.gamma * params.k0 * pow(q.rho, params.gamma - 1.0) / (params.gamma - 1.0)
        + 0.5 * c2 * dot3(&q.j, &q.j);
    let eta = [q.rho * c2 * q.j[0], q.rho * c2 * q.j[1], q.rho * c2 * q.j[2]];
    Ok(DualVariables { r, v, eta })
}

/// `L = rho r + m . v + J . eta - rho E`, evaluated from conserved variables.
pub fn legendre_transform(q: &Conserved, params: &ModelParams) -> Result<f64> {
    let p = dual_variables(q, params)?;
    Ok(q.rho * p.r + dot3(&q.m, &p.v) + dot3(&q.j, &p.eta) - energy_density(q, params)?)
}

/// Inverts the dual map on the convex branch, returning `(rho, m, J)`.
///
/// `rho` solves `g(rho) = r + |v|^2/2` with
/// `g(rho) = k0 gamma rho^(gamma-1)/(gamma-1) + |eta|^2 / (2 c0^2 rho^2)`,
/// which is increasing for `rho` above the convexity threshold.
pub fn conserved_from_dual(p: &DualVariables, params: &ModelParams) -> Result<Conserved> {
    let c2 = params.c0 * params.c0;
    let eta2 = dot3(&p.eta, &p.eta);
    let target = p.r + 0.5 * dot3(&p.v, &p.v);
    let gk = params.gamma * params.k0;
    let g = |rho: f64| gk * pow(rho, params.gamma - 1.0) / (params.gamma - 1.0) + eta2 / (2.0 * c2 * rho * rho);
    let dg = |rho: f64| gk * pow(rho, params.gamma - 2.0) - eta2 / (c2 * rho * rho * rho);

    // dg vanishes at rho_min^(gamma+1) = |eta|^2 / (c0^2 gamma k0).
    let rho_min = pow(eta2 / (c2 * gk), 1.0 / (params.gamma + 1.0));
    let mut lo = rho_min;
    if rho_min > 0.0 && g(rho_min) >= target {
        return Err(Error::NoConvexPreimage { rho_min });
    }
    let mut hi = if rho_min > 0.0 { 2.0 * rho_min } else { 1.0 };
    while g(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvexPreimage { rho_min: f64::INFINITY });
        }
    }

    // Safeguarded Newton on the bracket [lo, hi].
    let mut rho = hi;
    for _ in 0..200 {
        let f = g(rho) - target;
        if f > 0.0 {
            hi = rho;
        } else {
            lo = rho;
        }
        let d = dg(rho);
        let mut next = rho - f / d;
        if !(next > lo && next < hi) || d <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - rho).abs() <= 4.0 * f64::EPSILON * rho {
            rho = next;
            break;
        }
        rho = next;
    }
    admissible(rho)?;
    let inv = 1.0 / (rho * c2);
    Ok(Conserved {
        rho,
        m: [rho * p.v[0], rho * p.v[1], rho * p.v[2]],
        j: [p.eta[0] * inv, p.eta[1] * inv, p.eta[2] * inv],
    })
}

/// Legendre transform as a function of the dual variables alone.
///
/// For this potential `L = k0 rho^gamma + |eta|^2 / (rho c0^2)` once `rho`
/// has been recovered from `p`.
pub fn legendre_of_dual(p: &DualVariables, params: &ModelParams) -> Result<f64> {
    let q = conserved_from_dual(p, params)?;
    Ok(params.k0 * pow(q.rho, params.gamma) + dot3(&p.eta, &p.eta) / (q.rho * params.c0 * params.c0))
}
