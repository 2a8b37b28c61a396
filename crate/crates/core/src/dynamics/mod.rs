//! Time integration of the no-photon (conditional) Schrödinger equation
//! `dψ/dt = -i H(t) ψ` and the observables read off its solution.

mod integrator;
mod observables;

pub use integrator::{
    integrate_conditional, integrate_fixed, ConstantGenerator, EvolutionResult, FnGenerator, Generator,
    IntegratorSettings,
};
pub use observables::{excitation_number, fidelity, no_photon_probability, photon_population, population, Subspace};

use thiserror::Error;

use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("step-halving did not converge: residual {residual:.3e} at dt = {dt:.3e} (tolerance {tolerance:.1e})")]
    NotConverged { residual: f64, dt: f64, tolerance: f64 },
    #[error("initial squared norm {0} outside (0, 1]")]
    InitialNorm(f64),
    #[error("invalid integrator settings: {0}")]
    Settings(String),
    #[error("state became non-finite at t = {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, DynamicsError>;
