//! Physical scenario: spatial profiles of cavity and laser, atomic motion,
//! and the Hamiltonians built from them.
//!
//! Units: the peak coupling `g_max` is the unit of rate, the cavity waist
//! `w0` the unit of length.

mod config;
mod hamiltonian;
mod profiles;
mod trajectory;

pub use config::{ConditionalHamiltonian, LaserSchedule, Scheme, SystemConfig};
pub use hamiltonian::{
    build_h_cond_lambda, build_h_cond_two_level, build_h_eff, build_h_int, effective_params,
    fill_h_cond_lambda, fill_h_eff, EffectiveParams,
};
pub use profiles::{coupling_at, laser_at, CouplingProfile, LaserProfile, LASER_WAIST_RATIO};
pub use trajectory::{velocity_at, MotionLaw, Trajectory, ENTRY_OFFSET, SHAPED_START, SHAPED_STOP};

use thiserror::Error;

use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("expected a {expected}-level basis, found {found} levels")]
    LevelMismatch { expected: u8, found: u8 },
    #[error("expected {expected} per-atom values, found {found}")]
    AtomCount { expected: usize, found: usize },
    #[error("{name} must be non-negative, got {value}")]
    NegativeRate { name: &'static str, value: f64 },
    #[error("detuning must be non-zero")]
    ZeroDetuning,
    #[error("position {0} outside the shaped-velocity domain [-4 w0, w0]")]
    OutOfDomain(f64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if value.is_nan() || value < 0.0 {
        return Err(ModelError::NegativeRate { name, value });
    }
    Ok(())
}
