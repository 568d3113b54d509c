//! Implementations behind the `dtqw` subcommands: parameter resolution is
//! done by the binary; these take fully resolved configs, compute, and
//! write artifacts plus a manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dtqw_core::emulator::{
    derive_table_seed, reconstruct, simulate_counts, Basis, ChiCompletion, CountsTable,
};
use dtqw_core::observables::{
    entanglement_entropy, ipr, position_distribution, reduced_density_matrix,
};
use dtqw_core::sweep::{evaluate_cell, threshold_intervals, Direction, Quantity};
use dtqw_core::walk::{evolve, WalkParams};

use crate::config::{EmulateConfig, EvolveConfig, SweepConfig};
use crate::error::CliError;
use crate::formats::{
    self, fmt_sig, fmt_sig12, write_counts_csv, write_distribution_csv, write_summary_csv,
    write_sweep_csv, write_tomography_csv, TomographyRow,
};
use crate::manifest::write_manifest;
use crate::parallel::run_sweep_parallel;
use crate::svg;

/// Output directory, master seed, and thread cap of one invocation.
#[derive(Debug, Clone)]
pub struct RunOpts {
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
}

fn write_artifact(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut writer = BufWriter::new(file);
    write(&mut writer)
        .and_then(|()| writer.flush())
        .map_err(|e| CliError::io(&path, e))
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn to_json<T: serde::Serialize>(config: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(config).map_err(|e| CliError::runtime(format!("config echo: {e}")))
}

/// One walk run: `distribution.csv`, `summary.csv`, `distribution.svg`.
pub fn cmd_evolve(cfg: &EvolveConfig, opts: &RunOpts) -> Result<(), CliError> {
    let params = WalkParams::new(cfg.theta, cfg.phi, cfg.gamma, cfg.steps)?;
    prepare_out(&opts.out)?;

    let state = evolve(&params)?;
    let dist = position_distribution(&state)?;
    let rho = reduced_density_matrix(&state)?;
    let entropy = entanglement_entropy(&rho)?;
    let ipr_value = ipr(&dist);
    let survival = state.squared_norm();

    write_artifact(&opts.out, "distribution.csv", |w| {
        write_distribution_csv(w, &dist)
    })?;
    write_artifact(&opts.out, "summary.csv", |w| {
        write_summary_csv(
            w,
            entropy.s_e,
            ipr_value,
            survival,
            entropy.lambda1,
            entropy.lambda2,
        )
    })?;
    let subtitle = format!(
        "{} steps, theta = {} deg, phi = {} rad, gamma = {}",
        cfg.steps,
        fmt_sig(cfg.theta, 6),
        fmt_sig(cfg.phi, 6),
        fmt_sig(cfg.gamma, 6)
    );
    let chart = svg::distribution_chart(&dist, &subtitle);
    write_artifact(&opts.out, "distribution.svg", |w| {
        w.write_all(chart.as_bytes())
    })?;

    write_manifest(
        &opts.out,
        "evolve",
        opts.seed,
        opts.threads,
        to_json(cfg)?,
        &[
            "distribution.csv".to_string(),
            "summary.csv".to_string(),
            "distribution.svg".to_string(),
        ],
    )?;

    let (x_max, p_max) = dist.argmax();
    println!(
        "evolve: s_e = {}, ipr = {}, survival = {}, max P({x_max}) = {}",
        fmt_sig(entropy.s_e, 6),
        fmt_sig(ipr_value, 6),
        fmt_sig(survival, 6),
        fmt_sig(p_max, 6)
    );
    Ok(())
}

/// Grid sweep: `sweep.csv` plus `curves.svg` (few rows) or `heatmap.svg`.
pub fn cmd_sweep(cfg: &SweepConfig, opts: &RunOpts) -> Result<(), CliError> {
    let grid = cfg.to_grid()?;
    prepare_out(&opts.out)?;
    let result = run_sweep_parallel(&grid, opts.threads)?;

    write_artifact(&opts.out, "sweep.csv", |w| write_sweep_csv(w, &result))?;
    let subtitle = format!(
        "{} steps, theta x {} sweep",
        grid.steps,
        grid.second_axis_kind.name()
    );
    let chart_name = if grid.n_rows() <= 8 {
        "curves.svg"
    } else {
        "heatmap.svg"
    };
    let chart = if grid.n_rows() <= 8 {
        svg::curves_chart(&result, &subtitle)
    } else {
        svg::heatmap_chart(&result, &subtitle)
    };
    write_artifact(&opts.out, chart_name, |w| w.write_all(chart.as_bytes()))?;

    write_manifest(
        &opts.out,
        "sweep",
        opts.seed,
        opts.threads,
        to_json(cfg)?,
        &["sweep.csv".to_string(), chart_name.to_string()],
    )?;

    println!(
        "sweep: {} x {} cells -> {}",
        grid.n_rows(),
        grid.n_cols(),
        opts.out.join("sweep.csv").display()
    );
    Ok(())
}

/// Threshold report on a sweep CSV, one stdout line per second-axis value.
pub fn cmd_thresholds(
    input: &Path,
    quantity: &str,
    threshold: f64,
    direction: &str,
) -> Result<(), CliError> {
    let quantity = match quantity {
        "s_e" => Quantity::EntanglementEntropy,
        "ipr" => Quantity::Ipr,
        other => {
            return Err(CliError::usage(format!(
                "--quantity must be `s_e` or `ipr`, got `{other}`"
            )))
        }
    };
    let direction = match direction {
        "above" => Direction::Above,
        "below" => Direction::Below,
        other => {
            return Err(CliError::usage(format!(
                "--direction must be `above` or `below`, got `{other}`"
            )))
        }
    };
    let groups = formats::read_sweep_csv(input)?;
    for group in groups {
        let values = match quantity {
            Quantity::EntanglementEntropy => &group.s_e,
            Quantity::Ipr => &group.ipr,
        };
        let intervals = threshold_intervals(&group.theta, values, threshold, direction);
        let mut line = format!("{}:", fmt_sig12(group.second_axis_value));
        for interval in intervals {
            line.push_str(&format!(
                " [{}, {}]",
                fmt_sig12(interval.lo),
                fmt_sig12(interval.hi)
            ));
        }
        println!("{line}");
    }
    Ok(())
}

/// Emulated measurement chain: per-basis counts CSVs, `tomography.csv`,
/// and an error-bar chart when swept over more than one loss value.
pub fn cmd_emulate(cfg: &EmulateConfig, opts: &RunOpts) -> Result<(), CliError> {
    if cfg.gammas.is_empty() {
        return Err(CliError::usage("at least one gamma value is required"));
    }
    if cfg.repeats == 0 {
        return Err(CliError::usage("--repeats must be at least 1"));
    }
    let completion_is_oracle = match cfg.im_chi.as_str() {
        "oracle" => true,
        "zero" => false,
        other => {
            return Err(CliError::usage(format!(
                "--im-chi must be `oracle` or `zero`, got `{other}`"
            )))
        }
    };
    if cfg.repeats == 1 {
        eprintln!("warning: repeats = 1, reported errors degenerate to 0");
    }
    prepare_out(&opts.out)?;

    let mut artifacts = Vec::new();
    let mut rows = Vec::with_capacity(cfg.gammas.len());
    for (g_idx, &gamma) in cfg.gammas.iter().enumerate() {
        let params = WalkParams::new(cfg.theta, cfg.phi, gamma, cfg.steps)?;
        let loop_cfg = cfg.loop_spec.to_loop_config(gamma, cfg.loop_spec.n0);

        let mut tables: Vec<CountsTable> = Vec::with_capacity(2 * cfg.repeats);
        for rep in 0..cfg.repeats {
            let run = 2 * (g_idx * cfg.repeats + rep) as u64;
            tables.push(simulate_counts(
                &params,
                &loop_cfg,
                Basis::Hv,
                derive_table_seed(opts.seed, run),
            )?);
            tables.push(simulate_counts(
                &params,
                &loop_cfg,
                Basis::Da,
                derive_table_seed(opts.seed, run + 1),
            )?);
        }
        for (basis, suffix) in [(Basis::Hv, "hv"), (Basis::Da, "da")] {
            let name = format!("counts_g{g_idx}_{suffix}.csv");
            let subset: Vec<&CountsTable> =
                tables.iter().filter(|t| t.basis == basis).collect();
            write_artifact(&opts.out, &name, |w| write_counts_csv(w, &subset))?;
            artifacts.push(name);
        }

        let completion = if completion_is_oracle {
            let exact = reduced_density_matrix(&evolve(&params)?)?;
            ChiCompletion::OracleIm(exact.chi.im)
        } else {
            ChiCompletion::ZeroIm
        };
        let result = reconstruct(&tables, completion)?;
        println!(
            "emulate: gamma = {}: s_e = {} +- {}, ipr = {} +- {} ({} repeats)",
            fmt_sig(gamma, 6),
            fmt_sig(result.s_e_est, 6),
            fmt_sig(result.s_e_err, 3),
            fmt_sig(result.ipr_est, 6),
            fmt_sig(result.ipr_err, 3),
            result.n_repeats
        );
        rows.push(TomographyRow {
            gamma,
            theta: cfg.theta,
            s_e_est: result.s_e_est,
            s_e_err: result.s_e_err,
            ipr_est: result.ipr_est,
            ipr_err: result.ipr_err,
        });
    }

    write_artifact(&opts.out, "tomography.csv", |w| {
        write_tomography_csv(w, &rows)
    })?;
    artifacts.push("tomography.csv".to_string());

    if cfg.gammas.len() >= 2 {
        let exact = exact_curve(cfg)?;
        let subtitle = format!(
            "reconstructed coin state vs loss, theta = {} deg, {} steps",
            fmt_sig(cfg.theta, 6),
            cfg.steps
        );
        let chart = svg::tomography_chart(&rows, &exact, &subtitle);
        write_artifact(&opts.out, "tomography.svg", |w| {
            w.write_all(chart.as_bytes())
        })?;
        artifacts.push("tomography.svg".to_string());
    }

    write_manifest(
        &opts.out,
        "emulate",
        opts.seed,
        opts.threads,
        to_json(cfg)?,
        &artifacts,
    )?;
    Ok(())
}

/// Exact (infinite-statistics) entropy and IPR on a fine loss grid, for
/// the chart underlay.
fn exact_curve(cfg: &EmulateConfig) -> Result<Vec<(f64, f64, f64)>, CliError> {
    let lo = cfg.gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = cfg.gammas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n = 60;
    let mut curve = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let gamma = lo + (hi - lo) * i as f64 / n as f64;
        let cell = evaluate_cell(&WalkParams::new(cfg.theta, cfg.phi, gamma, cfg.steps)?)?;
        curve.push((gamma, cell.s_e, cell.ipr));
    }
    Ok(curve)
}
