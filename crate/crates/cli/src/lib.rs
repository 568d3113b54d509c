//! I/O companion to `dtqw-core`: CSV and JSON file formats, SVG charts,
//! run manifests with checksums, a rayon-backed sweep runner, and the
//! implementations behind the `dtqw` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod svg;

pub use error::CliError;
