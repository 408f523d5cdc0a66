//! Resource estimation and numerical verification for fault-tolerant
//! ground-state energy estimation with amplitude-amplified state preparation.
//!
//! The crate answers one question: when does spending extra T gates on
//! near-optimal state preparation (amplitude amplification driven by a
//! QSP-approximated ground-state reflector) beat simply repeating quantum
//! phase estimation on a cheap guess state? It provides
//!
//! - [`cost`]: arbitrary-precision T-gate tallies and the shared compilation
//!   models (rotation synthesis, multi-controlled X, QROM erasure);
//! - [`tfim`]: the transverse-field Ising chain, its exact free-fermion
//!   spectrum, and its block-encoding costs;
//! - [`firstquant`]: the first-quantized plane-wave electronic-structure
//!   cost model (lattice sums, precision registers, antisymmetrization,
//!   Hartree-Fock, block-encoding T and qubit counts);
//! - [`qpe`]: the low-T phase-estimation cost model;
//! - [`aa`]: amplitude-amplification planning (iteration count, QSP error
//!   budget with rotation-synthesis corrections, QSP degree, total cost);
//! - [`improvement`]: the improvement ratio iota, its asymptotic form, the
//!   sweep driver for parameter scans;
//! - [`reflector`]: dense eigenvalue-level simulation of amplitude
//!   amplification with epsilon-approximate reflectors;
//! - [`config`]/[`csvout`]: run configuration and deterministic CSV output
//!   shared by the service and the CLI.

// Negated float comparisons (`!(x > 0.0)`) reject NaN along with the
// out-of-range values; the positive forms do not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aa;
pub mod config;
pub mod cost;
pub mod csvout;
pub mod error;
pub mod firstquant;
pub mod improvement;
pub mod qpe;
pub mod reflector;
pub mod tfim;

pub use cost::TCount;
pub use error::{Error, Result};

/// CODATA 2018 hartree in electronvolts.
pub const HARTREE_EV: f64 = 27.211386245988;
