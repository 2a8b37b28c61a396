//! Dense complex linear algebra for the small Hilbert spaces of a few atoms
//! coupled to one cavity mode.
//!
//! Everything here is dense: the largest space in use is three three-level
//! atoms with at most one photon, i.e. 54 states.

mod basis;
mod eigen;
mod expm;
mod nullspace;
mod operator;
mod state;

pub use basis::{Basis, Label};
pub use eigen::hermitian_eigenvalues;
pub use expm::{expm, propagator};
pub use nullspace::{null_space, null_space_matrix, DEFAULT_NULL_TOL};
pub use operator::Operator;
pub(crate) use operator::spectral_norm;
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

use thiserror::Error;

/// Error type for basis, state and operator construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("levels per atom must be 2 or 3, got {0}")]
    InvalidLevels(u8),
    #[error("at least one atom is required")]
    NoAtoms,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry encountered")]
    NonFinite,
    #[error("label {0} is not part of the basis")]
    UnknownLabel(String),
    #[error("cannot parse state label {0:?}")]
    ParseLabel(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("operands refer to different bases")]
    BasisMismatch,
}

pub type Result<T> = std::result::Result<T, QuantumError>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);
