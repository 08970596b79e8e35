#![allow(dead_code)]

use involute_core::field::comp;
use involute_core::{Formulation, ModelParams};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec3(rng: &mut impl Rng, radius: f64) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
            return v;
        }
    }
}

/// Random admissible cell with `rho` in [0.5, 2], `|v| <= 2`, `|J| <= 2`,
/// and random cleaning variables for GLM.
pub fn random_cell(rng: &mut impl Rng, ncomp: usize) -> Vec<f64> {
    let mut q = vec![0.0; ncomp];
    let rho = rng.gen_range(0.5..2.0);
    let v = uniform_vec3(rng, 2.0);
    let j = uniform_vec3(rng, 2.0);
    q[comp::RHO] = rho;
    for k in 0..3 {
        q[comp::MOM + k] = rho * v[k];
        q[comp::J + k] = j[k];
    }
    if ncomp == 11 {
        let psi = uniform_vec3(rng, 1.0);
        q[comp::PSI..comp::PSI + 3].copy_from_slice(&psi);
        q[comp::PHI] = rng.gen_range(-1.0..1.0);
    }
    q
}

pub fn params_for(formulation: Formulation) -> ModelParams {
    let _ = formulation;
    ModelParams::with_cleaning_speed(5.0)
}

/// Fourth-order central-difference Jacobian of `f: R^n -> R^n`.
pub fn jacobian(n: usize, x: &[f64], f: impl Fn(&[f64], &mut [f64])) -> DMatrix<f64> {
    let mut jac = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut buf = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for c in 0..n {
        let h = 1e-3 * x[c].abs().max(1.0);
        for (slot, s) in [2.0, 1.0, -1.0, -2.0].iter().enumerate() {
            xp[c] = x[c] + s * h;
            f(&xp, &mut buf[slot]);
        }
        xp[c] = x[c];
        for r in 0..n {
            jac[(r, c)] = (-buf[0][r] + 8.0 * buf[1][r] - 8.0 * buf[2][r] + buf[3][r]) / (12.0 * h);
        }
    }
    jac
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Least-squares slope of `log(err)` against `log(n)`, sign flipped so
/// that decreasing errors give a positive order.
pub fn convergence_order(ns: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    -num / den
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Integration-test binaries have no `lib.rs` to anchor regression files.
pub fn proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}
