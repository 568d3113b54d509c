//! Error type shared by all modules of the crate.

use alloc::boxed::Box;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside its documented range (or was not finite).
    #[error("{name} = {value} outside valid range {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A shift would move amplitude past the preallocated lattice edge.
    #[error("shift would move amplitude off the lattice (radius {t_max})")]
    LatticeCapacity { t_max: usize },

    /// The surviving squared norm is too small to renormalize.
    #[error("state fully attenuated (squared norm <= 1e-300)")]
    DegenerateState,

    /// A closed-form result drifted further from the physical set than
    /// rounding can explain.
    #[error("numerical consistency violated: {0}")]
    NumericalConsistency(&'static str),

    /// A sweep aborted; carries the coordinates of the offending cell.
    #[error("sweep cell (theta = {theta_deg} deg, {second_name} = {second_value}) failed: {source}")]
    SweepCell {
        theta_deg: f64,
        second_name: &'static str,
        second_value: f64,
        #[source]
        source: Box<Error>,
    },

    /// After `step` steps from the origin only positions of matching parity
    /// are reachable.
    #[error("position {position} unreachable after {step} steps (parity)")]
    ParityViolation { position: i32, step: usize },

    /// The walk parameters and the loop configuration disagree on the loss
    /// dial.
    #[error("loss parameter mismatch: walk gamma = {walk_gamma}, loop gamma = {loop_gamma}")]
    LossMismatch { walk_gamma: f64, loop_gamma: f64 },

    /// Too few photons recorded for a meaningful reconstruction.
    #[error("insufficient counts: {total} recorded, at least {required} required")]
    InsufficientCounts { total: u64, required: u64 },

    /// The supplied counts tables cannot be combined.
    #[error("counts table mismatch: {0}")]
    TableMismatch(&'static str),

    /// The operation needs an HV-basis counts table.
    #[error("operation requires an HV-basis counts table")]
    BasisMismatch,

    /// A counts table with no recorded photons.
    #[error("empty counts table")]
    EmptyTable,
}
