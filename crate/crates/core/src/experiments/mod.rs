//! Ready-made transit scenarios, parameter sweeps and the figure presets
//! built from them.

mod figures;
mod scenario;
mod sweep;

pub use figures::{
    figure, Curve, CurveData, FigureName, FIG4_KAPPA, FIG4_V_MAX, FIG5_KAPPA, FIG5_V_MAX, FIG6_GAMMA, FIG6_PANELS,
};
pub use scenario::{
    run, run_three_atom, run_two_atom_direct, run_two_atom_lambda, Horizon, RunResult, RunSummary, ScenarioKind,
    ScenarioSpec, TimeSeries, EXIT_POSITION, LAMBDA_LEAD_START, THREE_ATOM_START,
};
pub use sweep::{sweep, SweepParameter, SweepRow, SweepSpec};

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::dynamics::DynamicsError;
use crate::model::ModelError;
use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
