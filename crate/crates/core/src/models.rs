//! Fluxes, nonconservative coupling and sources of the collocated systems.
//!
//! Every system is written as
//!
//! ```text
//! dq/dt + dF_x/dx + dF_y/dy + B_x(q) dq/dx + B_y(q) dq/dy = S(q)
//! ```
//!
//! with `q = (rho, m1, m2, m3, J1, J2, J3 [, psi1, psi2, psi3, phi])`.
//! The gradient part `d_k(v . J)` of the `J` equation lives in `F`, the
//! Galilean curl term `v_m (d_m J_k - d_k J_m)` lives in `B`.

use alloc::vec;
use alloc::vec::Vec;

use libm::{exp, pow, sqrt};

use crate::error::{Error, Result};
use crate::field::comp::{J, MOM, PHI, PSI, RHO};
use crate::grid::Axis;
use crate::params::{Formulation, ModelParams};

/// Levi-Civita symbol on zero-based indices.
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Original,
    GodunovPowell,
    Glm,
}

/// A collocated PDE system ready for the finite-volume integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeSystem {
    pub kind: SystemKind,
    pub params: ModelParams,
}

pub fn original_system(params: ModelParams) -> Result<PdeSystem> {
    params.validate(Formulation::Original)?;
    Ok(PdeSystem {
        kind: SystemKind::Original,
        params,
    })
}

pub fn godunov_powell_system(params: ModelParams) -> Result<PdeSystem> {
    params.validate(Formulation::GodunovPowell)?;
    Ok(PdeSystem {
        kind: SystemKind::GodunovPowell,
        params,
    })
}

pub fn glm_system(params: ModelParams) -> Result<PdeSystem> {
    params.validate(Formulation::Glm)?;
    Ok(PdeSystem {
        kind: SystemKind::Glm,
        params,
    })
}

impl PdeSystem {
    /// The collocated system used by `formulation`. The curl-free scheme
    /// borrows the original system for its density and momentum update.
    pub fn for_formulation(formulation: Formulation, params: ModelParams) -> Result<Self> {
        match formulation {
            Formulation::Original | Formulation::CurlFree => original_system(params),
            Formulation::GodunovPowell => godunov_powell_system(params),
            Formulation::Glm => glm_system(params),
        }
    }

    pub fn ncomp(&self) -> usize {
        match self.kind {
            SystemKind::Glm => 11,
            _ => 7,
        }
    }

    /// Physical flux `F_d(q)` written into `out[..ncomp]`.
    pub fn flux(&self, q: &[f64], axis: Axis, out: &mut [f64]) -> Result<()> {
        let d = axis.index();
        let rho = q[RHO];
        if !(rho > 0.0) {
            return Err(Error::NonPositiveDensity { rho });
        }
        let prm = &self.params;
        let c2 = prm.c0 * prm.c0;
        let m = [q[MOM], q[MOM + 1], q[MOM + 2]];
        let v = [m[0] / rho, m[1] / rho, m[2] / rho];
        let j = [q[J], q[J + 1], q[J + 2]];
        let p = prm.k0 * pow(rho, prm.gamma);
        let vj = v[0] * j[0] + v[1] * j[1] + v[2] * j[2];

        out[RHO] = m[d];
        for k in 0..3 {
            let delta = if k == d { 1.0 } else { 0.0 };
            out[MOM + k] = m[d] * v[k] + p * delta + rho * c2 * j[d] * j[k];
            out[J + k] = delta * vj;
        }
        if self.kind == SystemKind::Glm {
            let psi = [q[PSI], q[PSI + 1], q[PSI + 2]];
            let phi = q[PHI];
            let ac2 = prm.a_c * prm.a_c;
            for k in 0..3 {
                let delta = if k == d { 1.0 } else { 0.0 };
                let mut curl_psi = 0.0;
                let mut curl_j = 0.0;
                for l in 0..3 {
                    let e = levi_civita(k, d, l);
                    curl_psi += e * psi[l];
                    curl_j += e * j[l];
                }
                out[J + k] += curl_psi;
                out[PSI + k] = -ac2 * curl_j + delta * phi;
            }
            out[PHI] = prm.a_d * prm.a_d * psi[d];
        }
        Ok(())
    }

    /// Nonconservative product `B_d(q) dq` written into `out[..ncomp]`.
    pub fn noncons_product(&self, q: &[f64], dq: &[f64], axis: Axis, out: &mut [f64]) {
        let n = self.ncomp();
        out[..n].iter_mut().for_each(|o| *o = 0.0);
        let d = axis.index();
        let rho = q[RHO];
        let v = [q[MOM] / rho, q[MOM + 1] / rho, q[MOM + 2] / rho];
        let dj = [dq[J], dq[J + 1], dq[J + 2]];
        let v_dj = v[0] * dj[0] + v[1] * dj[1] + v[2] * dj[2];

        // v_m d_m J_k - v_m d_k J_m, restricted to the d-th derivative.
        for k in 0..3 {
            out[J + k] = v[d] * dj[k];
        }
        out[J + d] -= v_dj;

        if self.kind == SystemKind::GodunovPowell {
            // rho E_{J_m} (d_i J_m - d_m J_i) with E_J = c0^2 J.
            let c2 = self.params.c0 * self.params.c0;
            let j = [q[J], q[J + 1], q[J + 2]];
            let j_dj = j[0] * dj[0] + j[1] * dj[1] + j[2] * dj[2];
            for i in 0..3 {
                out[MOM + i] = -rho * c2 * j[d] * dj[i];
            }
            out[MOM + d] += rho * c2 * j_dj;
        }
    }

    /// Dense row-major `B_d(q)`, assembled column by column.
    pub fn noncons_matrix(&self, q: &[f64], axis: Axis) -> Vec<f64> {
        let n = self.ncomp();
        let mut mat = vec![0.0; n * n];
        let mut e = [0.0; crate::field::MAX_COMP];
        let mut col = [0.0; crate::field::MAX_COMP];
        for c in 0..n {
            e[c] = 1.0;
            self.noncons_product(q, &e, axis, &mut col);
            for r in 0..n {
                mat[r * n + c] = col[r];
            }
            e[c] = 0.0;
        }
        mat
    }

    /// Algebraic source `S(q)`; only the cleaning variables are damped.
    pub fn source(&self, q: &[f64], out: &mut [f64]) {
        let n = self.ncomp();
        out[..n].iter_mut().for_each(|o| *o = 0.0);
        if self.kind == SystemKind::Glm {
            for k in 0..3 {
                out[PSI + k] = -self.params.eps_c * q[PSI + k];
            }
            out[PHI] = -self.params.eps_d * q[PHI];
        }
    }

    /// Exact solution of `dq/dt = S(q)` over `dt`, in place.
    pub fn relax_sources(&self, q: &mut [f64], dt: f64) {
        if self.kind == SystemKind::Glm {
            let fc = exp(-self.params.eps_c * dt);
            let fd = exp(-self.params.eps_d * dt);
            for k in 0..3 {
                q[PSI + k] *= fc;
            }
            q[PHI] *= fd;
        }
    }

    /// Upper bound on `|lambda|` over the spectrum of `dF_d/dq + B_d`.
    ///
    /// In the frame moving with `v_d`, the transverse `J` components are
    /// advected and the `(rho, v, J_d)` block has `mu^2 = X` with
    /// `X^2 - S X + P = 0`,
    /// `S = c_s^2 + 3 c0^2 J_d^2 + c0^2 |J_t|^2`,
    /// `P = c0^2 |J_t|^2 (c_s^2 - c0^2 J_d^2)`. The discriminant is never
    /// negative, so `|mu| <= sqrt((S + sqrt(S^2 - 4P)) / 2)`. Roots go
    /// imaginary when `c0 |J_d| > c_s`; the modulus bound still holds.
    /// The cleaning block decouples with eigenvalues
    /// `(v_d +- sqrt(v_d^2 + 4 a_c^2)) / 2` and `+- a_d`.
    pub fn max_signal_speed(&self, q: &[f64], axis: Axis) -> Result<f64> {
        let rho = q[RHO];
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::NonPositiveDensity { rho });
        }
        let prm = &self.params;
        let d = axis.index();
        let c2 = prm.c0 * prm.c0;
        let vd = (q[MOM + d] / rho).abs();
        let cs2 = prm.gamma * prm.k0 * pow(rho, prm.gamma - 1.0);
        let jd2 = q[J + d] * q[J + d];
        let jt2 = q[J] * q[J] + q[J + 1] * q[J + 1] + q[J + 2] * q[J + 2] - jd2;
        let s = cs2 + 3.0 * c2 * jd2 + c2 * jt2;
        let p = c2 * jt2 * (cs2 - c2 * jd2);
        let disc = (s * s - 4.0 * p).max(0.0);
        let mut speed = vd + sqrt(0.5 * (s + sqrt(disc)));
        if self.kind == SystemKind::Glm {
            speed = speed.max(vd + prm.a_c).max(prm.a_d);
        }
        Ok(speed)
    }

    /// Largest directional bound over both grid axes.
    pub fn max_signal_speed_any(&self, q: &[f64]) -> Result<f64> {
        Ok(self
            .max_signal_speed(q, Axis::X)?
            .max(self.max_signal_speed(q, Axis::Y)?))
    }
}

/// Maximum signal speed for a collocated cell vector of any formulation.
pub fn max_signal_speed(q: &[f64], params: &ModelParams, formulation: Formulation) -> Result<f64> {
    PdeSystem {
        kind: kind_of(formulation),
        params: *params,
    }
    .max_signal_speed_any(q)
}

fn kind_of(formulation: Formulation) -> SystemKind {
    match formulation {
        Formulation::Original | Formulation::CurlFree => SystemKind::Original,
        Formulation::GodunovPowell => SystemKind::GodunovPowell,
        Formulation::Glm => SystemKind::Glm,
    }
}
