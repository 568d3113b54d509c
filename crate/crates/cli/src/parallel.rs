//! Rayon-backed sweep execution.
//!
//! Cells are independent pure evaluations collected into preassigned slots,
//! so the result is bit-identical to the serial runner for any thread
//! count or scheduling order.

use dtqw_core::sweep::{evaluate_cell, CellValue, SweepGrid, SweepResult};
use dtqw_core::Error;
use rayon::prelude::*;

use crate::error::CliError;

/// Run a sweep on a private thread pool; `threads = 0` uses the rayon
/// default sizing.
pub fn run_sweep_parallel(grid: &SweepGrid, threads: usize) -> Result<SweepResult, CliError> {
    grid.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))?;
    let (rows, cols) = (grid.n_rows(), grid.n_cols());
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|row| (0..cols).map(move |col| (row, col)))
        .collect();
    let values: Result<Vec<CellValue>, Error> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(row, col)| {
                evaluate_cell(&grid.params_at(row, col)).map_err(|source| Error::SweepCell {
                    theta_deg: grid.theta_axis[col],
                    second_name: grid.second_axis_kind.name(),
                    second_value: grid.second_axis[row],
                    source: Box::new(source),
                })
            })
            .collect()
    });
    let values = values?;
    let s_e = values.iter().map(|c| c.s_e).collect();
    let ipr = values.iter().map(|c| c.ipr).collect();
    let survival = values.iter().map(|c| c.survival).collect();
    Ok(SweepResult::from_raw(grid.clone(), s_e, ipr, survival)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dtqw_core::sweep::{run_sweep, SweepGrid};

    #[test]
    fn parallel_matches_serial_bit_for_bit() {
        let grid = SweepGrid::over_gamma(
            (0..40).map(|i| 1.0 + 2.2 * i as f64).collect(),
            vec![0.0, 0.1, 0.2],
            12,
            0.0,
        );
        let serial = run_sweep(&grid).unwrap();
        for threads in [1, 2, 8] {
            let parallel = run_sweep_parallel(&grid, threads).unwrap();
            assert_eq!(parallel, serial);
        }
    }

    #[test]
    fn failing_cell_reports_its_coordinates() {
        // at theta = 90 every path crosses the V branch, so a huge gamma
        // underflows the whole state to zero in a few steps
        let grid = SweepGrid::over_gamma(vec![90.0], vec![0.0, 600.0], 16, 0.0);
        let err = run_sweep_parallel(&grid, 2).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("gamma = 600"), "unexpected error: {text}");
        assert!(text.contains("attenuated"), "unexpected error: {text}");
    }
}
