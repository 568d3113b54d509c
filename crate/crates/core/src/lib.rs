//! Core simulation of one-dimensional discrete-time quantum walks with
//! polarization-dependent loss.
//!
//! The walker carries a two-level coin (H/V polarization) and a lattice
//! position; each step applies a coin rotation, a non-unitary attenuation of
//! the V component, and a polarization-conditioned shift. On top of the raw
//! evolution this crate provides:
//!
//! - [`observables`]: position distributions, inverse participation ratio,
//!   and coin-position entanglement entropy from the reduced coin state;
//! - [`sweep`]: deterministic grids over the coin angle against a second
//!   parameter axis, with threshold-interval extraction;
//! - [`emulator`]: a photon-counting emulation of a time-multiplexed
//!   fiber-loop measurement of the same walk, including two-basis
//!   tomography of the coin state;
//! - [`reference`]: a dense-matrix evolution used as an independent
//!   cross-check of the amplitude-array fast path.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats, and the
//! command-line front end live in the companion `dtqw-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod emulator;
pub mod error;
pub mod observables;
pub mod reference;
pub mod sweep;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;
