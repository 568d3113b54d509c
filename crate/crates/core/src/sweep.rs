//! Deterministic grids over the coin angle against a second parameter axis
//! (initial-state angle or loss), and threshold-interval extraction.
//!
//! Grid cells are independent: each one is a full `evolve` + observables
//! evaluation, so results never depend on execution order. The serial
//! runner here is the reference; a parallel runner with identical output
//! lives in the companion crate.

use alloc::{boxed::Box, vec, vec::Vec};
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::observables;
use crate::walk::{self, WalkParams};

/// What the second grid axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondAxisKind {
    Phi,
    Gamma,
}

impl SecondAxisKind {
    pub fn name(&self) -> &'static str {
        match self {
            SecondAxisKind::Phi => "phi",
            SecondAxisKind::Gamma => "gamma",
        }
    }
}

/// A rectangular sweep domain: a coin-angle axis crossed with either a
/// phi axis or a gamma axis, the remaining parameter held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub theta_axis: Vec<f64>,
    pub second_axis_kind: SecondAxisKind,
    pub second_axis: Vec<f64>,
    pub steps: usize,
    /// Initial-state angle used when the second axis varies gamma.
    pub fixed_phi: f64,
    /// Loss parameter used when the second axis varies phi.
    pub fixed_gamma: f64,
}

impl SweepGrid {
    /// Grid over (theta, phi) at a fixed loss.
    pub fn over_phi(theta_axis: Vec<f64>, phi_axis: Vec<f64>, steps: usize, gamma: f64) -> Self {
        SweepGrid {
            theta_axis,
            second_axis_kind: SecondAxisKind::Phi,
            second_axis: phi_axis,
            steps,
            fixed_phi: 0.0,
            fixed_gamma: gamma,
        }
    }

    /// Grid over (theta, gamma) at a fixed initial state.
    pub fn over_gamma(theta_axis: Vec<f64>, gamma_axis: Vec<f64>, steps: usize, phi: f64) -> Self {
        SweepGrid {
            theta_axis,
            second_axis_kind: SecondAxisKind::Gamma,
            second_axis: gamma_axis,
            steps,
            fixed_phi: phi,
            fixed_gamma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("theta_axis", &self.theta_axis)?;
        check_axis("second_axis", &self.second_axis)?;
        for row in 0..self.second_axis.len() {
            for col in 0..self.theta_axis.len() {
                self.params_at(row, col).validate()?;
            }
        }
        Ok(())
    }

    /// Walk parameters of the cell at (second-axis index, theta index).
    pub fn params_at(&self, row: usize, col: usize) -> WalkParams {
        let theta_deg = self.theta_axis[col];
        let second = self.second_axis[row];
        let (phi, gamma) = match self.second_axis_kind {
            SecondAxisKind::Phi => (second, self.fixed_gamma),
            SecondAxisKind::Gamma => (self.fixed_phi, second),
        };
        WalkParams {
            theta_deg,
            phi,
            gamma,
            steps: self.steps,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.second_axis.len()
    }

    pub fn n_cols(&self) -> usize {
        self.theta_axis.len()
    }
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Domain {
            name,
            value: 0.0,
            range: "non-empty, strictly increasing",
        });
    }
    for pair in axis.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Domain {
                name,
                value: pair[1],
                range: "non-empty, strictly increasing",
            });
        }
    }
    Ok(())
}

/// Coin-angle samples covering the open interval (0, 90) degrees at 0.2
/// degree pitch; fine enough to place threshold crossings to half a degree.
pub fn default_theta_axis() -> Vec<f64> {
    (0..450).map(|i| 0.1 + 0.2 * i as f64).collect()
}

/// Initial-state samples covering [0, pi] at pi/400 pitch.
pub fn default_phi_axis() -> Vec<f64> {
    (0..=400).map(|i| i as f64 * PI / 400.0).collect()
}

/// Observables of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellValue {
    pub s_e: f64,
    pub ipr: f64,
    pub survival: f64,
}

/// Evaluate one parameter point: evolve, renormalize, and reduce. Sweeps
/// are exactly this per cell, so a standalone call reproduces any sweep
/// entry bit for bit.
pub fn evaluate_cell(params: &WalkParams) -> Result<CellValue> {
    let state = walk::evolve(params)?;
    let dist = observables::position_distribution(&state)?;
    let rho = observables::reduced_density_matrix(&state)?;
    let entropy = observables::entanglement_entropy(&rho)?;
    Ok(CellValue {
        s_e: entropy.s_e,
        ipr: observables::ipr(&dist),
        survival: state.squared_norm(),
    })
}

/// Sweep output: one entry per grid cell, stored row-major with the second
/// axis as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    s_e: Vec<f64>,
    ipr: Vec<f64>,
    survival: Vec<f64>,
}

impl SweepResult {
    /// Assemble from flat row-major value arrays (used by the parallel
    /// runner); lengths must equal `rows * cols`.
    pub fn from_raw(grid: SweepGrid, s_e: Vec<f64>, ipr: Vec<f64>, survival: Vec<f64>) -> Result<Self> {
        let cells = grid.n_rows() * grid.n_cols();
        if s_e.len() != cells || ipr.len() != cells || survival.len() != cells {
            return Err(Error::Domain {
                name: "sweep value array length",
                value: s_e.len() as f64,
                range: "rows * cols",
            });
        }
        Ok(SweepResult {
            grid,
            s_e,
            ipr,
            survival,
        })
    }

    fn flat(&self, row: usize, col: usize) -> usize {
        row * self.grid.n_cols() + col
    }

    pub fn s_e_at(&self, row: usize, col: usize) -> f64 {
        self.s_e[self.flat(row, col)]
    }

    pub fn ipr_at(&self, row: usize, col: usize) -> f64 {
        self.ipr[self.flat(row, col)]
    }

    pub fn survival_at(&self, row: usize, col: usize) -> f64 {
        self.survival[self.flat(row, col)]
    }

    pub fn value_at(&self, quantity: Quantity, row: usize, col: usize) -> f64 {
        match quantity {
            Quantity::EntanglementEntropy => self.s_e_at(row, col),
            Quantity::Ipr => self.ipr_at(row, col),
        }
    }
}

/// Run the grid serially in row-major order.
pub fn run_sweep(grid: &SweepGrid) -> Result<SweepResult> {
    grid.validate()?;
    let (rows, cols) = (grid.n_rows(), grid.n_cols());
    let mut s_e = vec![0.0; rows * cols];
    let mut ipr = vec![0.0; rows * cols];
    let mut survival = vec![0.0; rows * cols];
    for row in 0..rows {
        for col in 0..cols {
            let params = grid.params_at(row, col);
            let cell = evaluate_cell(&params).map_err(|source| Error::SweepCell {
                theta_deg: params.theta_deg,
                second_name: grid.second_axis_kind.name(),
                second_value: grid.second_axis[row],
                source: Box::new(source),
            })?;
            s_e[row * cols + col] = cell.s_e;
            ipr[row * cols + col] = cell.ipr;
            survival[row * cols + col] = cell.survival;
        }
    }
    Ok(SweepResult {
        grid: grid.clone(),
        s_e,
        ipr,
        survival,
    })
}

/// Which swept quantity a threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    EntanglementEntropy,
    Ipr,
}

impl Quantity {
    /// Column name used in sweep CSV files.
    pub fn column(&self) -> &'static str {
        match self {
            Quantity::EntanglementEntropy => "s_e",
            Quantity::Ipr => "ipr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Above,
    Below,
}

/// A maximal contiguous run of coin angles clearing a threshold. Interior
/// endpoints sit midway between the last failing and first passing sample;
/// runs touching the axis boundary end at the boundary sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Threshold intervals of one row of samples over its theta axis.
pub fn threshold_intervals(
    theta_axis: &[f64],
    values: &[f64],
    threshold: f64,
    direction: Direction,
) -> Vec<ThetaInterval> {
    debug_assert_eq!(theta_axis.len(), values.len());
    let cols = theta_axis.len();
    let passes = |col: usize| match direction {
        Direction::Above => values[col] > threshold,
        Direction::Below => values[col] < threshold,
    };
    let mut intervals = Vec::new();
    let mut col = 0;
    while col < cols {
        if passes(col) {
            let start = col;
            while col + 1 < cols && passes(col + 1) {
                col += 1;
            }
            let lo = if start == 0 {
                theta_axis[0]
            } else {
                0.5 * (theta_axis[start - 1] + theta_axis[start])
            };
            let hi = if col == cols - 1 {
                theta_axis[cols - 1]
            } else {
                0.5 * (theta_axis[col] + theta_axis[col + 1])
            };
            intervals.push(ThetaInterval { lo, hi });
        }
        col += 1;
    }
    intervals
}

/// Threshold intervals per second-axis row, over the theta axis.
pub fn threshold_regions(
    result: &SweepResult,
    quantity: Quantity,
    threshold: f64,
    direction: Direction,
) -> Vec<Vec<ThetaInterval>> {
    (0..result.grid.n_rows())
        .map(|row| {
            let values: Vec<f64> = (0..result.grid.n_cols())
                .map(|col| result.value_at(quantity, row, col))
                .collect();
            threshold_intervals(&result.grid.theta_axis, &values, threshold, direction)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn one_by_one_grid_localized_case() {
        let grid = SweepGrid::over_phi(vec![0.0], vec![0.0], 16, 0.0);
        let result = run_sweep(&grid).unwrap();
        assert!(result.s_e_at(0, 0) < 1e-10);
        assert!(close(result.ipr_at(0, 0), 1.0, 1e-12));
        assert!(close(result.survival_at(0, 0), 1.0, 1e-12));
    }

    #[test]
    fn one_by_one_grid_split_case() {
        let grid = SweepGrid::over_phi(vec![0.0], vec![FRAC_PI_4], 16, 0.0);
        let result = run_sweep(&grid).unwrap();
        assert!(close(result.s_e_at(0, 0), 1.0, 1e-9));
        assert!(close(result.ipr_at(0, 0), 0.5, 1e-9));
    }

    #[test]
    fn cells_match_standalone_evaluation() {
        let grid = SweepGrid::over_gamma(
            vec![10.0, 37.0, 59.0],
            vec![0.0, 0.1, 0.2],
            16,
            FRAC_PI_4,
        );
        let result = run_sweep(&grid).unwrap();
        for row in 0..grid.n_rows() {
            for col in 0..grid.n_cols() {
                let cell = evaluate_cell(&grid.params_at(row, col)).unwrap();
                assert_eq!(result.s_e_at(row, col), cell.s_e);
                assert_eq!(result.ipr_at(row, col), cell.ipr);
                assert_eq!(result.survival_at(row, col), cell.survival);
            }
        }
    }

    #[test]
    fn loss_suppresses_entropy_and_raises_ipr_at_identity_coin() {
        let grid = SweepGrid::over_gamma(vec![0.0], vec![0.0, 0.1, 0.2], 16, FRAC_PI_4);
        let result = run_sweep(&grid).unwrap();
        assert!(result.s_e_at(0, 0) > result.s_e_at(1, 0));
        assert!(result.s_e_at(1, 0) > result.s_e_at(2, 0));
        assert!(result.ipr_at(0, 0) < result.ipr_at(1, 0));
        assert!(result.ipr_at(1, 0) < result.ipr_at(2, 0));
    }

    #[test]
    fn axes_must_be_strictly_increasing_and_nonempty() {
        let grid = SweepGrid::over_phi(vec![], vec![0.0], 4, 0.0);
        assert!(grid.validate().is_err());
        let grid = SweepGrid::over_phi(vec![10.0, 10.0], vec![0.0], 4, 0.0);
        assert!(grid.validate().is_err());
        let grid = SweepGrid::over_phi(vec![20.0, 10.0], vec![0.0], 4, 0.0);
        assert!(grid.validate().is_err());
    }

    #[test]
    fn grid_points_must_be_valid_parameters() {
        let grid = SweepGrid::over_phi(vec![5.0], vec![4.0], 4, 0.0); // phi > pi
        assert!(grid.validate().is_err());
        let grid = SweepGrid::over_gamma(vec![200.0], vec![0.0], 4, 0.0); // theta > 180
        assert!(grid.validate().is_err());
    }

    #[test]
    fn default_axes_span_their_documented_ranges() {
        let theta = default_theta_axis();
        assert_eq!(theta.len(), 450);
        assert!(close(theta[0], 0.1, 1e-12));
        assert!(close(*theta.last().unwrap(), 89.9, 1e-9));
        let phi = default_phi_axis();
        assert_eq!(phi.len(), 401);
        assert_eq!(phi[0], 0.0);
        assert!(close(*phi.last().unwrap(), PI, 1e-15));
    }

    #[test]
    fn threshold_regions_midpoint_endpoints() {
        // synthetic single-row result: passes at columns 2..=3 of 0,2,4,6,8
        let grid = SweepGrid::over_phi(vec![0.0, 2.0, 4.0, 6.0, 8.0], vec![0.0], 0, 0.0);
        let result = SweepResult::from_raw(
            grid,
            vec![0.1, 0.2, 0.9, 0.8, 0.3],
            vec![0.5; 5],
            vec![1.0; 5],
        )
        .unwrap();
        let rows = threshold_regions(&result, Quantity::EntanglementEntropy, 0.5, Direction::Above);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), 1);
        assert!(close(rows[0][0].lo, 3.0, 1e-12));
        assert!(close(rows[0][0].hi, 7.0, 1e-12));
    }

    #[test]
    fn threshold_regions_boundary_runs_and_empty_result() {
        let grid = SweepGrid::over_phi(vec![1.0, 2.0, 3.0], vec![0.0], 0, 0.0);
        let result = SweepResult::from_raw(
            grid,
            vec![0.9, 0.1, 0.9],
            vec![0.5; 3],
            vec![1.0; 3],
        )
        .unwrap();
        let rows = threshold_regions(&result, Quantity::EntanglementEntropy, 0.5, Direction::Above);
        assert_eq!(rows[0].len(), 2);
        assert!(close(rows[0][0].lo, 1.0, 1e-12));
        assert!(close(rows[0][0].hi, 1.5, 1e-12));
        assert!(close(rows[0][1].lo, 2.5, 1e-12));
        assert!(close(rows[0][1].hi, 3.0, 1e-12));

        let none = threshold_regions(&result, Quantity::Ipr, -1.0, Direction::Below);
        assert!(none[0].is_empty());
    }
}
