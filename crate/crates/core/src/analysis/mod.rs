//! Closed-form results for two- and three-atom cavity passages: eigensystems
//! of the single-excitation block, adiabatic elimination, the analytic
//! no-photon probability, decoherence-free subspaces and stop errors.

mod df;
mod eigensystem;
mod no_photon;

pub use df::{df_subspace, symmetric_target, three_atom_df_decomposition, DFBasis, ThreeAtomDecomposition};
pub use eigensystem::{
    bright_eigensystem, dark_state, dark_state_in, eliminated_amplitudes, eliminated_eigen_amplitudes,
    rates_r_s, single_excitation_block, single_excitation_labels, stop_fidelity, zeno_projector_distance,
    AdiabaticFrame, BrightEigensystem,
};
pub use no_photon::{analytic_no_photon_probability, dark_amplitude_decay, rates_along, NoPhotonEstimate};

use thiserror::Error;

use crate::model::ModelError;
use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("couplings vanish: the dark-state direction is undefined")]
    ZeroCoupling,
    #[error("quadrature did not converge: last estimates {previous:.6e} and {current:.6e}")]
    Quadrature { previous: f64, current: f64 },
    #[error("expected a basis of {atoms} two-level atoms with at least one photon")]
    Basis { atoms: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
