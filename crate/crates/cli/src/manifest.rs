//! Run manifests: the fully resolved configuration, seed, thread cap, and
//! SHA-256 checksums of every artifact a command wrote. Feeding a manifest
//! back through `--config` reproduces the run byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub threads: usize,
    pub config: serde_json::Value,
    /// file name -> sha256 hex of every artifact written alongside.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
    }
    Ok(hex)
}

/// Checksum the named artifacts in `dir` and write `manifest.json` there.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    seed: u64,
    threads: usize,
    config: serde_json::Value,
    artifacts: &[String],
) -> Result<PathBuf, CliError> {
    let mut outputs = BTreeMap::new();
    for name in artifacts {
        outputs.insert(name.clone(), sha256_hex(&dir.join(name))?);
    }
    let manifest = Manifest {
        command: command.to_string(),
        seed,
        threads,
        config,
        outputs,
    };
    let path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::runtime(format!("manifest serialization: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
