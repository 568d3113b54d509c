//! JSON configuration documents and their resolution into run parameters.
//!
//! Every command accepts `--config <json>`; flags override file values. A
//! previously emitted manifest is also a valid `--config` argument: the
//! loader unwraps its `config` payload (and reuses its seed unless a flag
//! overrides it), which is how runs are reproduced.

use std::f64::consts::PI;
use std::path::Path;

use dtqw_core::emulator::LoopConfig;
use dtqw_core::sweep::SweepGrid;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// An axis is either an explicit value list or a `{start, stop, pitch}`
/// range expanded as `start + i * pitch` while within `stop`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, pitch: f64 },
}

impl AxisSpec {
    pub fn expand(&self, key: &str) -> Result<Vec<f64>, CliError> {
        match self {
            AxisSpec::Values(v) => Ok(v.clone()),
            AxisSpec::Range { start, stop, pitch } => {
                if !(*pitch > 0.0) || stop < start {
                    return Err(CliError::usage(format!(
                        "config key `{key}`: range needs pitch > 0 and stop >= start"
                    )));
                }
                let n = ((stop - start) / pitch + 1e-9).floor() as usize + 1;
                Ok((0..n).map(|i| start + i as f64 * pitch).collect())
            }
        }
    }
}

fn default_steps() -> usize {
    16
}

/// File-level fields of an `evolve` run; all optional so flags can fill
/// them in.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EvolveFile {
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub phi_over_pi: Option<f64>,
    pub gamma: Option<f64>,
    pub steps: Option<usize>,
}

/// Fully resolved `evolve` parameters, echoed into the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FixedSpec {
    pub phi: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SweepFile {
    pub theta_axis: Option<AxisSpec>,
    pub second_axis_kind: Option<String>,
    pub second_axis: Option<AxisSpec>,
    pub steps: Option<usize>,
    #[serde(default)]
    pub fixed: FixedSpec,
}

/// Resolved sweep grid with expanded axes, echoed into the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub theta_axis: Vec<f64>,
    pub second_axis_kind: String,
    pub second_axis: Vec<f64>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub fixed: FixedSpec,
}

impl SweepFile {
    pub fn resolve(self) -> Result<SweepConfig, CliError> {
        let theta_axis = self
            .theta_axis
            .ok_or_else(|| CliError::usage("config key `theta_axis` is required for sweep"))?
            .expand("theta_axis")?;
        let kind = self
            .second_axis_kind
            .ok_or_else(|| CliError::usage("config key `second_axis_kind` is required for sweep"))?;
        if kind != "phi" && kind != "gamma" {
            return Err(CliError::usage(format!(
                "config key `second_axis_kind`: expected \"phi\" or \"gamma\", got \"{kind}\""
            )));
        }
        let second_axis = self
            .second_axis
            .ok_or_else(|| CliError::usage("config key `second_axis` is required for sweep"))?
            .expand("second_axis")?;
        Ok(SweepConfig {
            theta_axis,
            second_axis_kind: kind,
            second_axis,
            steps: self.steps.unwrap_or(16),
            fixed: self.fixed,
        })
    }
}

impl SweepConfig {
    pub fn to_grid(&self) -> Result<SweepGrid, CliError> {
        let grid = match self.second_axis_kind.as_str() {
            "phi" => SweepGrid::over_phi(
                self.theta_axis.clone(),
                self.second_axis.clone(),
                self.steps,
                self.fixed.gamma.unwrap_or(0.0),
            ),
            "gamma" => SweepGrid::over_gamma(
                self.theta_axis.clone(),
                self.second_axis.clone(),
                self.steps,
                self.fixed.phi.unwrap_or(0.0),
            ),
            other => {
                return Err(CliError::usage(format!(
                    "config key `second_axis_kind`: expected \"phi\" or \"gamma\", got \"{other}\""
                )))
            }
        };
        grid.validate().map_err(|e| {
            let kind = match e {
                dtqw_core::Error::Domain { name, .. } => name,
                _ => "grid",
            };
            CliError::usage(format!("config key `{kind}`: {e}"))
        })?;
        Ok(grid)
    }
}

/// Loop calibration as stored in config documents under the `loop` key;
/// field defaults mirror the experiment's quoted values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopSpec {
    #[serde(default = "LoopSpec::d_survival")]
    pub survival_h: f64,
    #[serde(default = "LoopSpec::d_survival")]
    pub survival_v_base: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "LoopSpec::d_outcoupling")]
    pub outcoupling: f64,
    #[serde(default = "LoopSpec::d_n0")]
    pub n0: f64,
    #[serde(default = "LoopSpec::d_long")]
    pub long_delay_ns: f64,
    #[serde(default = "LoopSpec::d_short")]
    pub short_delay_ns: f64,
    #[serde(default = "LoopSpec::d_rep")]
    pub rep_rate_khz: f64,
}

impl LoopSpec {
    fn d_survival() -> f64 {
        0.58
    }
    fn d_outcoupling() -> f64 {
        0.10
    }
    fn d_n0() -> f64 {
        1.0e6
    }
    fn d_long() -> f64 {
        155.0
    }
    fn d_short() -> f64 {
        150.0
    }
    fn d_rep() -> f64 {
        125.0
    }

    pub fn to_loop_config(&self, gamma: f64, n0: f64) -> LoopConfig {
        LoopConfig {
            survival_h: self.survival_h,
            survival_v_base: self.survival_v_base,
            gamma,
            outcoupling: self.outcoupling,
            n0,
            long_delay_ns: self.long_delay_ns,
            short_delay_ns: self.short_delay_ns,
            rep_rate_khz: self.rep_rate_khz,
        }
    }
}

impl Default for LoopSpec {
    fn default() -> Self {
        LoopSpec {
            survival_h: Self::d_survival(),
            survival_v_base: Self::d_survival(),
            gamma: 0.0,
            outcoupling: Self::d_outcoupling(),
            n0: Self::d_n0(),
            long_delay_ns: Self::d_long(),
            short_delay_ns: Self::d_short(),
            rep_rate_khz: Self::d_rep(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EmulateFile {
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub phi_over_pi: Option<f64>,
    pub gammas: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub n0: Option<f64>,
    pub repeats: Option<usize>,
    pub im_chi: Option<String>,
    #[serde(rename = "loop")]
    pub loop_spec: Option<LoopSpec>,
}

/// Resolved `emulate` parameters, echoed into the manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmulateConfig {
    pub theta: f64,
    pub phi: f64,
    pub gammas: Vec<f64>,
    pub steps: usize,
    pub repeats: usize,
    pub im_chi: String,
    #[serde(rename = "loop")]
    pub loop_spec: LoopSpec,
}

/// Resolve `--phi` / `--phi-over-pi` (mutually exclusive) to radians.
pub fn resolve_phi(phi: Option<f64>, phi_over_pi: Option<f64>) -> Result<Option<f64>, CliError> {
    match (phi, phi_over_pi) {
        (Some(_), Some(_)) => Err(CliError::usage(
            "--phi and --phi-over-pi are mutually exclusive",
        )),
        (Some(p), None) => Ok(Some(p)),
        (None, Some(m)) => Ok(Some(m * PI)),
        (None, None) => Ok(None),
    }
}

/// Seed and thread count recovered from a manifest used as `--config`.
#[derive(Debug, Clone, Copy, Default)]
pub struct InheritedRun {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

/// Load a config document. If the file is a manifest (carries a `command`
/// key) it must match the invoked command; its `config` payload and run
/// settings are returned instead.
pub fn load_config<T: serde::de::DeserializeOwned>(
    path: &Path,
    command: &str,
) -> Result<(T, InheritedRun), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let (payload, inherited) = match value.get("command") {
        Some(cmd) => {
            if cmd.as_str() != Some(command) {
                return Err(CliError::usage(format!(
                    "{}: manifest was produced by `{}`, not `{command}`",
                    path.display(),
                    cmd.as_str().unwrap_or("?")
                )));
            }
            let inherited = InheritedRun {
                seed: value.get("seed").and_then(|s| s.as_u64()),
                threads: value
                    .get("threads")
                    .and_then(|t| t.as_u64())
                    .map(|t| t as usize),
            };
            let payload = value
                .get("config")
                .cloned()
                .ok_or_else(|| {
                    CliError::usage(format!("{}: manifest lacks a `config` key", path.display()))
                })?;
            (payload, inherited)
        }
        None => (value, InheritedRun::default()),
    };
    let deserializer = payload.clone();
    let parsed = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        CliError::usage(format!(
            "{}: config key `{}`: {}",
            path.display(),
            e.path(),
            e.inner()
        ))
    })?;
    Ok((parsed, inherited))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_range_expansion_hits_both_ends() {
        let axis = AxisSpec::Range {
            start: 0.1,
            stop: 89.9,
            pitch: 0.2,
        };
        let values = axis.expand("theta_axis").unwrap();
        assert_eq!(values.len(), 450);
        assert!((values[0] - 0.1).abs() < 1e-12);
        assert!((values[449] - 89.9).abs() < 1e-9);
    }

    #[test]
    fn axis_rejects_bad_ranges() {
        let axis = AxisSpec::Range {
            start: 1.0,
            stop: 0.0,
            pitch: 0.1,
        };
        assert!(axis.expand("theta_axis").is_err());
        let axis = AxisSpec::Range {
            start: 0.0,
            stop: 1.0,
            pitch: 0.0,
        };
        assert!(axis.expand("theta_axis").is_err());
    }

    #[test]
    fn sweep_file_resolution_requires_axes() {
        let file = SweepFile::default();
        let err = file.resolve().unwrap_err();
        assert!(err.to_string().contains("theta_axis"));
    }

    #[test]
    fn loop_spec_defaults_match_calibration() {
        let spec = LoopSpec::default();
        assert_eq!(spec.survival_h, 0.58);
        assert_eq!(spec.survival_v_base, 0.58);
        assert_eq!(spec.outcoupling, 0.10);
        assert_eq!(spec.long_delay_ns, 155.0);
        assert_eq!(spec.short_delay_ns, 150.0);
        assert_eq!(spec.rep_rate_khz, 125.0);
    }

    #[test]
    fn phi_flags_are_mutually_exclusive() {
        assert!(resolve_phi(Some(0.1), Some(0.25)).is_err());
        let phi = resolve_phi(None, Some(0.25)).unwrap().unwrap();
        assert!((phi - PI / 4.0).abs() < 1e-15);
    }
}
