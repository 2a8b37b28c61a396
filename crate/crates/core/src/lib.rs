//! Conditional no-photon dynamics of atoms carried through a lossy optical
//! cavity.
//!
//! Atoms move on prescribed trajectories through a Gaussian cavity mode;
//! the evolution is integrated under the non-Hermitian Hamiltonian that
//! describes runs without a photon emission. `quantum` holds the state
//! space and linear algebra, `model` the couplings and Hamiltonians,
//! `dynamics` the integrator and observables, `analysis` the closed-form
//! results used as cross-checks, and `experiments` the ready-made transit
//! scenarios and sweeps. `cli` backs the `dapsim` binary.
//!
//! Units: `ħ = 1`, rates in units of the peak coupling, lengths in units of
//! the mode waist.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod experiments;
pub mod model;
pub mod quantum;
