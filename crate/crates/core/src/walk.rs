//! Walker state and the per-step evolution.
//!
//! One step applies, in order: the coin rotation on the polarization, the
//! diagonal loss `|H><H| + exp(-gamma)|V><V|`, and the conditioned shift
//! (H moves to x+1, V to x-1). This is the rightmost-first reading of the
//! step operator `S M (C (x) I)`. Amplitudes are kept unnormalized under
//! loss; the observables layer renormalizes.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Parameter triple plus step count; fully determines a deterministic run.
///
/// `theta_deg` is the coin angle in degrees (the convention used at every
/// public boundary), `phi` the initial-state angle in radians, `gamma` the
/// per-step amplitude attenuation exponent of the V component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub theta_deg: f64,
    pub phi: f64,
    pub gamma: f64,
    pub steps: usize,
}

impl WalkParams {
    pub fn new(theta_deg: f64, phi: f64, gamma: f64, steps: usize) -> Result<Self> {
        let params = WalkParams {
            theta_deg,
            phi,
            gamma,
            steps,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("theta_deg", self.theta_deg, 0.0, 180.0, "[0, 180]")?;
        check_range("phi", self.phi, 0.0, PI, "[0, pi]")?;
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::Domain {
                name: "gamma",
                value: self.gamma,
                range: "[0, inf)",
            });
        }
        Ok(())
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if !value.is_finite() || value < lo || value > hi {
        return Err(Error::Domain { name, value, range });
    }
    Ok(())
}

/// The 2x2 coin `(cos t, sin t; sin t, -cos t)`: orthogonal, determinant -1,
/// and its own inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub hh: f64,
    pub hv: f64,
    pub vh: f64,
    pub vv: f64,
}

impl CoinMatrix {
    /// Build the coin for an angle given in degrees.
    pub fn new(theta_deg: f64) -> Result<Self> {
        check_range("theta_deg", theta_deg, 0.0, 180.0, "[0, 180]")?;
        let theta = theta_deg * PI / 180.0;
        let (sin, cos) = theta.sin_cos();
        Ok(CoinMatrix {
            hh: cos,
            hv: sin,
            vh: sin,
            vv: -cos,
        })
    }
}

/// Complex amplitude pair per lattice site; the walker's full state after
/// `t` steps.
///
/// Sites span `x in [-t_max, t_max]` with `t_max` fixed at construction, so
/// a walk of `steps` steps never reallocates: the support can never exceed
/// `|x| <= t`. `a` holds the H component, `b` the V component.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    t: usize,
    t_max: usize,
    a: Vec<C64>,
    b: Vec<C64>,
    squared_norm: f64,
}

impl WalkerState {
    /// The localized initial state `[cos(phi)|H> + i sin(phi)|V>] |0>`.
    pub fn initial(phi: f64, t_max: usize) -> Result<Self> {
        check_range("phi", phi, 0.0, PI, "[0, pi]")?;
        let n = 2 * t_max + 1;
        let mut state = WalkerState {
            t: 0,
            t_max,
            a: vec![C64::ZERO; n],
            b: vec![C64::ZERO; n],
            squared_norm: 0.0,
        };
        state.a[t_max] = C64::new(phi.cos(), 0.0);
        state.b[t_max] = C64::new(0.0, phi.sin());
        state.recompute_norm();
        Ok(state)
    }

    /// Build a state from raw amplitude arrays (index 0 is `x = -t_max`).
    /// Both arrays must share the same odd length.
    pub fn from_amplitudes(t: usize, a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        if a.len() != b.len() || a.len() % 2 == 0 {
            return Err(Error::Domain {
                name: "amplitude array length",
                value: a.len() as f64,
                range: "odd, equal for both components",
            });
        }
        let t_max = (a.len() - 1) / 2;
        let mut state = WalkerState {
            t,
            t_max,
            a,
            b,
            squared_norm: 0.0,
        };
        state.recompute_norm();
        Ok(state)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Cached `sum_x (|a|^2 + |b|^2)`; maintained by every operation.
    pub fn squared_norm(&self) -> f64 {
        self.squared_norm
    }

    /// Recompute the squared norm from scratch (for consistency checks).
    pub fn recomputed_squared_norm(&self) -> f64 {
        self.a
            .iter()
            .zip(self.b.iter())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    fn idx(&self, x: i32) -> Option<usize> {
        let i = x + self.t_max as i32;
        (0..self.a.len() as i32).contains(&i).then_some(i as usize)
    }

    /// H amplitude at site `x` (zero outside the lattice).
    pub fn amp_h(&self, x: i32) -> C64 {
        self.idx(x).map_or(C64::ZERO, |i| self.a[i])
    }

    /// V amplitude at site `x` (zero outside the lattice).
    pub fn amp_v(&self, x: i32) -> C64 {
        self.idx(x).map_or(C64::ZERO, |i| self.b[i])
    }

    pub fn amps_h(&self) -> &[C64] {
        &self.a
    }

    pub fn amps_v(&self) -> &[C64] {
        &self.b
    }

    /// Lattice positions in ascending order, `-t_max ..= t_max`.
    pub fn positions(&self) -> impl Iterator<Item = i32> {
        let t_max = self.t_max as i32;
        -t_max..=t_max
    }

    /// Apply the coin to every site: `a' = hh a + hv b`, `b' = vh a + vv b`.
    /// Orthogonality keeps the squared norm unchanged up to rounding.
    pub fn apply_coin(&mut self, coin: &CoinMatrix) {
        for (a, b) in self.a.iter_mut().zip(self.b.iter_mut()) {
            let (a0, b0) = (*a, *b);
            *a = coin.hh * a0 + coin.hv * b0;
            *b = coin.vh * a0 + coin.vv * b0;
        }
        self.recompute_norm();
    }

    /// Attenuate the V component by `exp(-gamma)` at every site. The squared
    /// norm decreases (or stays equal at `gamma = 0` / vanishing V part).
    pub fn apply_loss(&mut self, gamma: f64) -> Result<()> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Domain {
                name: "gamma",
                value: gamma,
                range: "[0, inf)",
            });
        }
        let decay = (-gamma).exp();
        for b in self.b.iter_mut() {
            *b *= decay;
        }
        self.recompute_norm();
        Ok(())
    }

    /// Move the H component one site right and the V component one site
    /// left. Errors if nonzero amplitude would leave the lattice.
    pub fn apply_shift(&mut self) -> Result<()> {
        let n = self.a.len();
        if self.a[n - 1] != C64::ZERO || self.b[0] != C64::ZERO {
            return Err(Error::LatticeCapacity { t_max: self.t_max });
        }
        for i in (1..n).rev() {
            self.a[i] = self.a[i - 1];
        }
        self.a[0] = C64::ZERO;
        for i in 0..n - 1 {
            self.b[i] = self.b[i + 1];
        }
        self.b[n - 1] = C64::ZERO;
        // a pure permutation of the amplitudes; the cached norm stays exact
        Ok(())
    }

    /// One full step: coin, then loss, then shift; increments `t`.
    pub fn step(&mut self, params: &WalkParams) -> Result<()> {
        let coin = CoinMatrix::new(params.theta_deg)?;
        self.step_with(&coin, params.gamma)
    }

    pub(crate) fn step_with(&mut self, coin: &CoinMatrix, gamma: f64) -> Result<()> {
        self.apply_coin(coin);
        self.apply_loss(gamma)?;
        self.apply_shift()?;
        self.t += 1;
        Ok(())
    }

    fn recompute_norm(&mut self) {
        let norm = self.recomputed_squared_norm();
        debug_assert!(norm.is_finite());
        self.squared_norm = norm;
    }
}

/// Run the full walk: the initial state advanced by `params.steps` steps.
/// Identical parameters produce a bit-identical state.
pub fn evolve(params: &WalkParams) -> Result<WalkerState> {
    params.validate()?;
    let coin = CoinMatrix::new(params.theta_deg)?;
    let mut state = WalkerState::initial(params.phi, params.steps)?;
    for _ in 0..params.steps {
        state.step_with(&coin, params.gamma)?;
    }
    Ok(state)
}
