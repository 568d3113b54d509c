//! Measured quantities of a walker state: position distribution, inverse
//! participation ratio, and coin-position entanglement entropy.
//!
//! All observables are computed from the renormalized (post-selected) state,
//! so a lossy walk and its rescaled copy give identical results.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::walk::WalkerState;

/// Squared norms at or below this are treated as fully attenuated.
pub const DEGENERATE_NORM: f64 = 1e-300;

/// Normalized per-site detection probabilities, split by polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub t: usize,
    x_min: i32,
    pub p_h: Vec<f64>,
    pub p_v: Vec<f64>,
    pub p_total: Vec<f64>,
}

impl PositionDistribution {
    /// Assemble from per-polarization probabilities; `p_total` is their
    /// element-wise sum.
    pub fn new(t: usize, x_min: i32, p_h: Vec<f64>, p_v: Vec<f64>) -> Self {
        debug_assert_eq!(p_h.len(), p_v.len());
        let p_total = p_h.iter().zip(p_v.iter()).map(|(h, v)| h + v).collect();
        PositionDistribution {
            t,
            x_min,
            p_h,
            p_v,
            p_total,
        }
    }

    pub fn len(&self) -> usize {
        self.p_total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_total.is_empty()
    }

    /// Lattice position of array index `i`.
    pub fn x_at(&self, i: usize) -> i32 {
        self.x_min + i as i32
    }

    /// `(x, p_h, p_v, p_total)` per site, ascending in `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64, f64, f64)> + '_ {
        self.p_h
            .iter()
            .zip(self.p_v.iter())
            .zip(self.p_total.iter())
            .enumerate()
            .map(|(i, ((&h, &v), &p))| (self.x_at(i), h, v, p))
    }

    /// Site with the largest total probability; ties resolve to the
    /// leftmost site.
    pub fn argmax(&self) -> (i32, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, &p) in self.p_total.iter().enumerate() {
            if p > best.1 {
                best = (i, p);
            }
        }
        (self.x_at(best.0), best.1)
    }
}

/// `p_h(x) = |a(x)|^2 / norm`, `p_v(x) = |b(x)|^2 / norm`; sums to one.
pub fn position_distribution(state: &WalkerState) -> Result<PositionDistribution> {
    let norm = state.squared_norm();
    if norm <= DEGENERATE_NORM {
        return Err(Error::DegenerateState);
    }
    let p_h = state.amps_h().iter().map(|a| a.norm_sqr() / norm).collect();
    let p_v = state.amps_v().iter().map(|b| b.norm_sqr() / norm).collect();
    Ok(PositionDistribution::new(
        state.t(),
        -(state.t_max() as i32),
        p_h,
        p_v,
    ))
}

/// Inverse participation ratio `sum_x P(x)^2`: near 1 for a localized
/// walker, near 1/N for uniform spreading over N occupied sites.
pub fn ipr(dist: &PositionDistribution) -> f64 {
    dist.p_total.iter().map(|p| p * p).sum()
}

/// The 2x2 coin state after tracing out position:
/// `alpha = sum |a|^2`, `beta = sum |b|^2`, `chi = sum a conj(b)`,
/// all divided by the squared norm so that the trace is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensityMatrix {
    pub alpha: f64,
    pub beta: f64,
    pub chi: C64,
}

impl ReducedDensityMatrix {
    /// Unit trace and positive semidefiniteness, up to rounding.
    pub fn validate(&self) -> Result<()> {
        if (self.alpha + self.beta - 1.0).abs() > 1e-10 {
            return Err(Error::NumericalConsistency("coin state trace differs from one"));
        }
        if self.alpha * self.beta - self.chi.norm_sqr() < -1e-12 {
            return Err(Error::NumericalConsistency("coin state not positive semidefinite"));
        }
        Ok(())
    }
}

pub fn reduced_density_matrix(state: &WalkerState) -> Result<ReducedDensityMatrix> {
    let norm = state.squared_norm();
    if norm <= DEGENERATE_NORM {
        return Err(Error::DegenerateState);
    }
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut chi = C64::ZERO;
    for (a, b) in state.amps_h().iter().zip(state.amps_v().iter()) {
        alpha += a.norm_sqr();
        beta += b.norm_sqr();
        chi += a * b.conj();
    }
    Ok(ReducedDensityMatrix {
        alpha: alpha / norm,
        beta: beta / norm,
        chi: chi / norm,
    })
}

/// Entanglement entropy with the coin-state eigenvalues it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    pub s_e: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Von Neumann entropy of the coin state, from the closed-form eigenvalues
/// `lambda = (1 +- sqrt(1 - 4[alpha beta - |chi|^2])) / 2`, in bits. The
/// convention `0 log 0 = 0` applies, so pure states give exactly zero.
pub fn entanglement_entropy(rho: &ReducedDensityMatrix) -> Result<EntropyValue> {
    let det = rho.alpha * rho.beta - rho.chi.norm_sqr();
    let disc = 1.0 - 4.0 * det;
    if disc < -1e-10 {
        return Err(Error::NumericalConsistency(
            "eigenvalue discriminant negative beyond tolerance",
        ));
    }
    let root = disc.max(0.0).sqrt();
    let lambda1 = clamp_eigenvalue((1.0 + root) / 2.0)?;
    let lambda2 = clamp_eigenvalue((1.0 - root) / 2.0)?;
    let s_e = (entropy_term(lambda1) + entropy_term(lambda2)).clamp(0.0, 1.0);
    Ok(EntropyValue {
        s_e,
        lambda1,
        lambda2,
    })
}

fn clamp_eigenvalue(lambda: f64) -> Result<f64> {
    if !(-1e-10..=1.0 + 1e-10).contains(&lambda) {
        return Err(Error::NumericalConsistency("eigenvalue outside [0, 1]"));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

fn entropy_term(lambda: f64) -> f64 {
    if lambda > 0.0 {
        -lambda * lambda.log2()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{evolve, WalkParams, WalkerState};
    use alloc::vec;
    use core::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ballistic_distribution_is_a_point_mass() {
        let state = evolve(&WalkParams::new(0.0, 0.0, 0.0, 16).unwrap()).unwrap();
        let dist = position_distribution(&state).unwrap();
        let (x, p) = dist.argmax();
        assert_eq!(x, 16);
        assert!(close(p, 1.0, 1e-12));
        assert!(close(ipr(&dist), 1.0, 1e-12));
    }

    #[test]
    fn split_ballistic_distribution_has_two_half_masses() {
        let state = evolve(&WalkParams::new(0.0, FRAC_PI_4, 0.0, 16).unwrap()).unwrap();
        let dist = position_distribution(&state).unwrap();
        let p16 = dist.p_total[dist.len() - 1];
        let pm16 = dist.p_total[0];
        assert!(close(p16, 0.5, 1e-12));
        assert!(close(pm16, 0.5, 1e-12));
        assert!(close(ipr(&dist), 0.5, 1e-12));
    }

    #[test]
    fn lossy_single_step_distribution_renormalizes() {
        let state = evolve(&WalkParams::new(45.0, 0.0, 0.2, 1).unwrap()).unwrap();
        let dist = position_distribution(&state).unwrap();
        // closed form: P(+1) = 1 / (1 + exp(-0.4)), P(-1) = exp(-0.4) / (1 + exp(-0.4))
        let e = (-0.4f64).exp();
        let p_plus = 1.0 / (1.0 + e);
        assert!(close(dist.p_total[2], p_plus, 1e-14));
        assert!(close(dist.p_total[0], 1.0 - p_plus, 1e-14));
        assert!(close(p_plus, 0.5987, 5e-5));
        let expected_ipr = p_plus * p_plus + (1.0 - p_plus) * (1.0 - p_plus);
        assert!(close(ipr(&dist), expected_ipr, 1e-14));
        assert!(close(expected_ipr, 0.5195, 5e-5));
    }

    #[test]
    fn distribution_sums_to_one_and_splits_by_polarization() {
        let state = evolve(&WalkParams::new(59.0, FRAC_PI_4, 0.2, 16).unwrap()).unwrap();
        let dist = position_distribution(&state).unwrap();
        let total: f64 = dist.p_total.iter().sum();
        assert!(close(total, 1.0, 1e-10));
        for (_, h, v, p) in dist.iter() {
            assert!(h >= 0.0 && v >= 0.0);
            assert!(close(p, h + v, 1e-15));
        }
    }

    #[test]
    fn degenerate_state_is_rejected() {
        let state = WalkerState::from_amplitudes(0, vec![C64::ZERO], vec![C64::ZERO]).unwrap();
        assert!(matches!(
            position_distribution(&state),
            Err(Error::DegenerateState)
        ));
        assert!(matches!(
            reduced_density_matrix(&state),
            Err(Error::DegenerateState)
        ));
    }

    #[test]
    fn pure_h_initial_coin_state() {
        let state = WalkerState::initial(0.0, 0).unwrap();
        let rho = reduced_density_matrix(&state).unwrap();
        assert!(close(rho.alpha, 1.0, 1e-15));
        assert!(close(rho.beta, 0.0, 1e-15));
        assert!(rho.chi.norm() < 1e-15);
        let ent = entanglement_entropy(&rho).unwrap();
        assert_eq!(ent.s_e, 0.0);
    }

    #[test]
    fn disjoint_supports_give_maximally_mixed_coin() {
        // H pinned at +16, V at -16: perfect coin-position correlation
        let state = evolve(&WalkParams::new(0.0, FRAC_PI_4, 0.0, 16).unwrap()).unwrap();
        let rho = reduced_density_matrix(&state).unwrap();
        assert!(close(rho.alpha, 0.5, 1e-12));
        assert!(close(rho.beta, 0.5, 1e-12));
        assert!(rho.chi.norm() < 1e-12);
        let ent = entanglement_entropy(&rho).unwrap();
        assert!(close(ent.s_e, 1.0, 1e-12));
        assert!(close(ent.lambda1, 0.5, 1e-12));
        assert!(close(ent.lambda2, 0.5, 1e-12));
    }

    #[test]
    fn one_step_from_pure_h_has_no_coherence() {
        // after one step H lives at +1 and V at -1, so site-wise cross terms vanish
        let state = evolve(&WalkParams::new(45.0, 0.0, 0.0, 1).unwrap()).unwrap();
        let rho = reduced_density_matrix(&state).unwrap();
        assert!(close(rho.alpha, 0.5, 1e-14));
        assert!(close(rho.beta, 0.5, 1e-14));
        assert!(rho.chi.norm() < 1e-15);
    }

    #[test]
    fn entropy_of_lossy_branch_weights() {
        let e = (-0.4f64).exp();
        let alpha = 1.0 / (1.0 + e);
        let rho = ReducedDensityMatrix {
            alpha,
            beta: 1.0 - alpha,
            chi: C64::ZERO,
        };
        let ent = entanglement_entropy(&rho).unwrap();
        // closed form: binary entropy of alpha
        let expected = -alpha * alpha.log2() - (1.0 - alpha) * (1.0 - alpha).log2();
        assert!(close(ent.s_e, expected, 1e-14));
        assert!(close(ent.s_e, 0.9717, 1e-4));
        assert!(close(ent.lambda1 + ent.lambda2, 1.0, 1e-12));
        assert!(close(ent.lambda1, alpha.max(1.0 - alpha), 1e-12));
    }

    #[test]
    fn entropy_rejects_unphysical_matrices() {
        let rho = ReducedDensityMatrix {
            alpha: 0.5,
            beta: 0.5,
            chi: C64::new(0.7, 0.0), // |chi|^2 > alpha beta
        };
        assert!(matches!(
            entanglement_entropy(&rho),
            Err(Error::NumericalConsistency(_))
        ));
    }

    #[test]
    fn reduced_density_matrix_passes_its_own_invariants() {
        for theta in [0.0, 19.0, 37.0, 59.0, 90.0, 121.0, 180.0] {
            let state = evolve(&WalkParams::new(theta, 0.4, 0.15, 12).unwrap()).unwrap();
            let rho = reduced_density_matrix(&state).unwrap();
            rho.validate().unwrap();
        }
    }
}
