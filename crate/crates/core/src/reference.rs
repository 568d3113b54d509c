//! Dense-matrix reference evolution.
//!
//! Builds the one-step operator literally as a matrix on the
//! `2 (2 t_max + 1)`-dimensional coin (x) position space — the shift and
//! loss matrices multiplied onto a block-diagonal coin — and applies it by
//! plain matrix-vector products. Deliberately naive; it shares no code with
//! the amplitude-array fast path in [`crate::walk`] and exists to
//! cross-check it.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::walk::WalkParams;

/// Basis index of (site index, polarization): `2 * xi + pol`, pol 0 = H.
fn flat(xi: usize, pol: usize) -> usize {
    2 * xi + pol
}

/// The one-step operator as a dense row-major `dim x dim` matrix,
/// `dim = 2 (2 t_max + 1)`. All entries are real.
pub fn dense_step_matrix(theta_deg: f64, gamma: f64, t_max: usize) -> Result<Vec<f64>> {
    WalkParams::new(theta_deg, 0.0, gamma, 0)?;
    let sites = 2 * t_max + 1;
    let dim = 2 * sites;
    let theta = theta_deg * PI / 180.0;
    let (sin, cos) = theta.sin_cos();

    // coin on every site
    let mut coin = vec![0.0; dim * dim];
    for xi in 0..sites {
        coin[flat(xi, 0) * dim + flat(xi, 0)] = cos;
        coin[flat(xi, 0) * dim + flat(xi, 1)] = sin;
        coin[flat(xi, 1) * dim + flat(xi, 0)] = sin;
        coin[flat(xi, 1) * dim + flat(xi, 1)] = -cos;
    }

    // diagonal loss: identity on H, exp(-gamma) on V
    let decay = (-gamma).exp();
    let mut loss = vec![0.0; dim * dim];
    for xi in 0..sites {
        loss[flat(xi, 0) * dim + flat(xi, 0)] = 1.0;
        loss[flat(xi, 1) * dim + flat(xi, 1)] = decay;
    }

    // conditioned shift: H to the right neighbor, V to the left
    let mut shift = vec![0.0; dim * dim];
    for xi in 0..sites {
        if xi + 1 < sites {
            shift[flat(xi + 1, 0) * dim + flat(xi, 0)] = 1.0;
        }
        if xi > 0 {
            shift[flat(xi - 1, 1) * dim + flat(xi, 1)] = 1.0;
        }
    }

    // compose rightmost-first: coin, then loss, then shift
    let loss_coin = matmul(&loss, &coin, dim);
    Ok(matmul(&shift, &loss_coin, dim))
}

fn matmul(lhs: &[f64], rhs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let l = lhs[i * dim + k];
            if l == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += l * rhs[k * dim + j];
            }
        }
    }
    out
}

fn apply(matrix: &[f64], vector: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::ZERO; dim];
    for i in 0..dim {
        let mut acc = C64::ZERO;
        for j in 0..dim {
            let m = matrix[i * dim + j];
            if m != 0.0 {
                acc += m * vector[j];
            }
        }
        out[i] = acc;
    }
    out
}

/// Evolve by repeated dense matrix application; returns the per-site
/// (H, V) amplitude arrays over `x in [-steps, steps]`.
pub fn dense_evolve(params: &WalkParams) -> Result<(Vec<C64>, Vec<C64>)> {
    params.validate()?;
    let t_max = params.steps;
    let sites = 2 * t_max + 1;
    let dim = 2 * sites;
    let mut psi = vec![C64::ZERO; dim];
    psi[flat(t_max, 0)] = C64::new(params.phi.cos(), 0.0);
    psi[flat(t_max, 1)] = C64::new(0.0, params.phi.sin());
    let step = dense_step_matrix(params.theta_deg, params.gamma, t_max)?;
    for _ in 0..params.steps {
        psi = apply(&step, &psi, dim);
    }
    let a = (0..sites).map(|xi| psi[flat(xi, 0)]).collect();
    let b = (0..sites).map(|xi| psi[flat(xi, 1)]).collect();
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_single_step_splits_evenly() {
        let params = WalkParams::new(45.0, 0.0, 0.0, 1).unwrap();
        let (a, b) = dense_evolve(&params).unwrap();
        assert!((a[2].norm_sqr() - 0.5).abs() < 1e-15);
        assert!((b[0].norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dense_identity_coin_is_ballistic() {
        let params = WalkParams::new(0.0, 0.0, 0.0, 5).unwrap();
        let (a, b) = dense_evolve(&params).unwrap();
        assert!((a[10].norm_sqr() - 1.0).abs() < 1e-12);
        assert!(b.iter().all(|z| z.norm_sqr() < 1e-30));
    }
}
