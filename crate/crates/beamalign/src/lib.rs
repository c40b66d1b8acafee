//! Link-level simulator for time-domain beam alignment in wideband mmWave
//! systems.
//!
//! A base station with a hybrid array probes the downlink with pseudo-noise
//! sequences, one per RF chain, beamformed along pseudo-random sparse
//! directions in the DFT beamspace. A user collects matched-filter energy
//! measurements over a number of beacon slots, averages them into
//! second-order statistics, and recovers the non-negative angle-domain power
//! map by non-negative least squares. The argmax of the recovered map is the
//! best AoA-AoD pair.
//!
//! The crate is organized around the stages of that pipeline:
//!
//! - [`config`]: link configuration and derived timing/energy/SNR quantities
//! - [`pn`]: m-sequence and Gold sequence generation, correlation, matched
//!   filtering
//! - [`beamspace`]: DFT bases, steering vectors, sparse probing beams and the
//!   pseudo-random codebook
//! - [`channel`]: the L-cluster time-varying multipath channel and its
//!   ground-truth second-order map
//! - [`measurements`]: chip-level and closed-form synthesis of the energy
//!   measurements and assembly of the linear system
//! - [`solvers`]: the NNLS recovery (Lawson-Hanson and projected gradient)
//!   and the OMP instantaneous-channel baseline
//! - [`experiments`]: Monte-Carlo detection-probability harness, the
//!   NNLS-vs-OMP robustness comparison, the chip-duration trade-off and the
//!   power-delay-profile study
//!
//! Every random draw is keyed off an explicit seed through counter-based
//! ChaCha streams, so simulation outputs are bit-reproducible.
//!
//! See the `examples/` directory for one runnable program per experiment and
//! the `beamalign` binary for the command-line front end.

pub mod beamspace;
pub mod channel;
pub mod config;
mod error;
pub mod experiments;
pub mod measurements;
pub mod pn;
pub mod rng;
pub mod solvers;
pub mod validate;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
