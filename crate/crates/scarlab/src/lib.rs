//! Exact diagonalization toolkit for partially integrable spin chains that
//! host generalized spin-helix states as quantum many-body scars.
//!
//! The crate builds XXC-family Hamiltonians with integrability-breaking
//! `P h' P` terms, constructs their exact scar towers, and verifies the
//! algebraic, spectral, and entanglement structure at desk scale:
//!
//! - [`hilbert`] — basis indexing, local-operator embedding, sparse
//!   operators, and state vectors (the substrate for everything else).
//! - [`models`] — builders for the XXC density, its Temperley-Lieb
//!   deformation, helix projectors, the spinful-fermion and clock models,
//!   and a small library of reference Hamiltonians (DMI, spin-1 XY, AKLT).
//! - [`scars`] — generalized spin-helix states, the unfolded orthogonal
//!   scar basis, and the supplementary scar towers.
//! - [`fragmentation`] — Krylov sector decomposition of the computational
//!   basis and the spin-1/2 XXZ reduction check inside integrable sectors.
//! - [`spectral`] — dense Hermitian eigensolving, level-spacing ratios,
//!   Wigner-Dyson diagnostics, and scar identification in spectra.
//! - [`entanglement`] — Schmidt-decomposition entropies, the analytic
//!   reduced-density-matrix formula for scar states, and log-scaling fits.
//! - [`annihilators`] — Temperley-Lieb relation checks, local-annihilation
//!   checks, and the nullspace solver that discovers extensive local
//!   Hermitian annihilators from a two-local projector.

pub mod annihilators;
pub mod entanglement;
pub mod fragmentation;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod scars;
pub mod spectral;

pub use hilbert::{BasisIndex, LocalOperator, ManyBodyOperator, StateVector};
pub use models::{ModelSpec, PerturbationSpec, SplittingSpec};
pub use scars::{ScarLabel, ScarTower};

use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Default cap on dense-matrix conversions (Hilbert-space dimension).
pub const DEFAULT_DENSE_CAP: usize = 20_000;

/// Errors produced by construction and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("operator is not a projector (max |P^2 - P| = {deviation:.3e})")]
    NotProjector { deviation: f64 },
    #[error("dense conversion of dimension {dim} exceeds cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    #[error("helix compatibility violated: gamma*L/(2 pi) = {0} is not an integer")]
    HelixIncompatible(f64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("too few levels for statistics: have {have}, need {need}")]
    TooFewLevels { have: usize, need: usize },
    #[error("degenerate ground state: {0}")]
    DegenerateGroundState(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
