//! Constellation-constrained achievable rates over AWGN channels and the
//! two-layer "cocktail BPSK" superposition scheme.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`] - Gauss-Hermite and adaptive Gauss-Kronrod integration.
//! * [`modulation`] - constellations, AWGN output densities, mutual
//!   information, Shannon capacity and rate sweeps.
//! * [`cocktail`] - per-stream and sum rates of the layered scheme, energy
//!   bookkeeping, capacity deltas and amplitude-ratio optimisation.
//! * [`analysis`] - derivative and small-SNR limit analysis of the BPSK rate.
//! * [`montecarlo`] - seeded sampled-entropy and SIC bit-level simulators used
//!   as an oracle for everything above.
//!
//! All rates are in bits per (complex) channel use. SNRs are linear unless a
//! name says `db`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cocktail;
mod error;
pub mod modulation;
pub mod montecarlo;
pub mod quadrature;

pub use error::{Error, Result};

/// log₂(e), the small-SNR slope of both capacity and the BPSK rate.
pub const LOG2_E: f64 = std::f64::consts::LOG2_E;
