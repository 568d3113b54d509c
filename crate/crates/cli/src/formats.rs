//! CSV schemas and the fixed-precision number rendering shared by every
//! writer, so re-exports of identical data are byte-identical.

use std::io::{self, Write};
use std::path::Path;

use dtqw_core::emulator::CountsTable;
use dtqw_core::observables::PositionDistribution;
use dtqw_core::sweep::SweepResult;

use crate::error::CliError;

/// Render with `digits` significant digits, trimming trailing zeros;
/// scientific notation outside a comfortable decimal window.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa_digits = digits.saturating_sub(1);
        trim_scientific(&format!("{value:.mantissa_digits$e}"))
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{value:.decimals$}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// 12 significant digits: the rendering used in every CSV file.
pub fn fmt_sig12(value: f64) -> String {
    fmt_sig(value, 12)
}

fn trim_scientific(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
            format!("{mantissa}e{exp}")
        }
        None => s.to_string(),
    }
}

pub const SWEEP_HEADER: &str = "theta_deg,second_axis_name,second_axis_value,steps,s_e,ipr,survival";

/// Long-format sweep CSV: one row per grid cell, second-axis-major, theta
/// ascending within a row block.
pub fn write_sweep_csv<W: Write>(w: &mut W, result: &SweepResult) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    let grid = &result.grid;
    for row in 0..grid.n_rows() {
        for col in 0..grid.n_cols() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_sig12(grid.theta_axis[col]),
                grid.second_axis_kind.name(),
                fmt_sig12(grid.second_axis[row]),
                grid.steps,
                fmt_sig12(result.s_e_at(row, col)),
                fmt_sig12(result.ipr_at(row, col)),
                fmt_sig12(result.survival_at(row, col)),
            )?;
        }
    }
    Ok(())
}

/// One second-axis block of a sweep CSV read back from disk.
#[derive(Debug, Clone)]
pub struct SweepCsvRow {
    pub second_axis_name: String,
    pub second_axis_value: f64,
    pub theta: Vec<f64>,
    pub s_e: Vec<f64>,
    pub ipr: Vec<f64>,
}

/// Parse a sweep CSV, grouping consecutive rows that share a second-axis
/// value. Missing columns are usage errors naming the column.
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepCsvRow>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::usage(format!("{}: empty sweep CSV", path.display())))?;
    let columns: Vec<&str> = header.split(',').collect();
    let find = |name: &str| -> Result<usize, CliError> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| CliError::usage(format!("{}: missing column `{name}`", path.display())))
    };
    let c_theta = find("theta_deg")?;
    let c_name = find("second_axis_name")?;
    let c_value = find("second_axis_value")?;
    let c_se = find("s_e")?;
    let c_ipr = find("ipr")?;

    let mut groups: Vec<SweepCsvRow> = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |idx: usize, what: &str| -> Result<f64, CliError> {
            fields
                .get(idx)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "{}: line {}: bad `{what}` field",
                        path.display(),
                        line_no + 2
                    ))
                })
        };
        let theta = parse(c_theta, "theta_deg")?;
        let value = parse(c_value, "second_axis_value")?;
        let s_e = parse(c_se, "s_e")?;
        let ipr = parse(c_ipr, "ipr")?;
        let name = fields.get(c_name).unwrap_or(&"").to_string();
        let start_new = groups
            .last()
            .map_or(true, |g| g.second_axis_value.to_bits() != value.to_bits());
        if start_new {
            groups.push(SweepCsvRow {
                second_axis_name: name,
                second_axis_value: value,
                theta: Vec::new(),
                s_e: Vec::new(),
                ipr: Vec::new(),
            });
        }
        let group = groups.last_mut().expect("group exists after push");
        group.theta.push(theta);
        group.s_e.push(s_e);
        group.ipr.push(ipr);
    }
    Ok(groups)
}

/// Per-site distribution: `x,p_h,p_v,p_total`.
pub fn write_distribution_csv<W: Write>(w: &mut W, dist: &PositionDistribution) -> io::Result<()> {
    writeln!(w, "x,p_h,p_v,p_total")?;
    for (x, p_h, p_v, p_total) in dist.iter() {
        writeln!(
            w,
            "{x},{},{},{}",
            fmt_sig12(p_h),
            fmt_sig12(p_v),
            fmt_sig12(p_total)
        )?;
    }
    Ok(())
}

/// Scalar observables of one run: `s_e,ipr,survival,lambda1,lambda2`.
pub fn write_summary_csv<W: Write>(
    w: &mut W,
    s_e: f64,
    ipr: f64,
    survival: f64,
    lambda1: f64,
    lambda2: f64,
) -> io::Result<()> {
    writeln!(w, "s_e,ipr,survival,lambda1,lambda2")?;
    writeln!(
        w,
        "{},{},{},{},{}",
        fmt_sig12(s_e),
        fmt_sig12(ipr),
        fmt_sig12(survival),
        fmt_sig12(lambda1),
        fmt_sig12(lambda2)
    )
}

/// Emulated counts: `step,basis,position,outcome,count,seed`, one file may
/// concatenate several tables (rows keep their table's seed).
pub fn write_counts_csv<W: Write>(w: &mut W, tables: &[&CountsTable]) -> io::Result<()> {
    writeln!(w, "step,basis,position,outcome,count,seed")?;
    for table in tables {
        for (&(position, outcome), &count) in &table.counts {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                table.step,
                table.basis.label(),
                position,
                outcome.label(),
                count,
                table.seed
            )?;
        }
    }
    Ok(())
}

/// One tomography row per loss value.
#[derive(Debug, Clone, Copy)]
pub struct TomographyRow {
    pub gamma: f64,
    pub theta: f64,
    pub s_e_est: f64,
    pub s_e_err: f64,
    pub ipr_est: f64,
    pub ipr_err: f64,
}

pub fn write_tomography_csv<W: Write>(w: &mut W, rows: &[TomographyRow]) -> io::Result<()> {
    writeln!(w, "gamma,theta,s_e_est,s_e_err,ipr_est,ipr_err")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_sig12(r.gamma),
            fmt_sig12(r.theta),
            fmt_sig12(r.s_e_est),
            fmt_sig12(r.s_e_err),
            fmt_sig12(r.ipr_est),
            fmt_sig12(r.ipr_err)
        )?;
    }
    Ok(())
}
