//! Simulation of entanglement transfer from two-mode entangled light (NOON and
//! entangled-coherent states) to a pair of flying atomic qubits that cross two
//! remote driven cavities.
//!
//! The crate covers three dynamical regimes:
//!
//! - lossless transit, where the resonant exchange interaction is solved
//!   exactly through the accumulated pulse area ([`unitary`]);
//! - cavity photon loss during the transit, unraveled as quantum-jump Monte
//!   Carlo trajectories ([`trajectories`]);
//! - the dissipation-dominated limit, where the cavity fields are adiabatically
//!   eliminated and the qubits evolve under an effective generator built from
//!   the second moments of the driving field ([`bad_cavity`]).
//!
//! Entanglement (negativity) and quantum discord live in [`measures`], the
//! tensor-product linear algebra in [`hilbert`], driving-field preparation in
//! [`resources`], and the position-dependent coupling of an atom falling or
//! gliding through a Hermite-Gauss cavity mode in [`coupling`].
//!
//! Start with the runnable examples (`cargo run --example noon_transfer`) or
//! the `flyq` binary, which executes JSON-described scenarios and writes CSV
//! curves.

pub mod hilbert;
pub mod linalg;
pub mod resources;
pub mod coupling;
pub mod ode;
pub mod unitary;
pub mod trajectories;
pub mod bad_cavity;
pub mod measures;
pub mod cli;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("integrator step size underflow at t = {t:.6e}")]
    Stiffness { t: f64 },
    #[error("steady state is not unique: kernel dimension {0}")]
    NonUniqueSteadyState(usize),
    #[error("optimizer failure: {0}")]
    OptimizerFailure(String),
    #[error("eigensolver failed to converge")]
    EigenFailure,
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
