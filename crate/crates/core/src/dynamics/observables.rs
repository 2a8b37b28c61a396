use super::{EvolutionResult, Result};
use crate::quantum::{QuantumError, StateVector};
use crate::quantum::Label;

/// Probability that no photon left the cavity: squared norm of the final
/// unnormalized state.
pub fn no_photon_probability(result: &EvolutionResult) -> f64 {
    result.final_state.norm_sqr().clamp(0.0, 1.0)
}

/// `|⟨target|state⟩|² / ⟨state|state⟩`
pub fn fidelity(state: &StateVector, target: &StateVector) -> Result<f64> {
    let n2 = state.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(QuantumError::ZeroNorm.into());
    }
    Ok((target.inner(state)?.norm_sqr() / n2).clamp(0.0, 1.0))
}

pub enum Subspace<'a> {
    /// Span of the listed basis states.
    Labels(&'a [Label]),
    /// A single (possibly unnormalized) vector.
    Vector(&'a StateVector),
}

/// Population of the normalized `state` in `subspace`.
pub fn population(state: &StateVector, subspace: Subspace<'_>) -> Result<f64> {
    let n2 = state.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(QuantumError::ZeroNorm.into());
    }
    let p = match subspace {
        Subspace::Labels(labels) => {
            let mut idx = labels
                .iter()
                .map(|l| state.basis().index_of(l))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            idx.sort_unstable();
            idx.dedup();
            idx.iter().map(|&i| state.amplitudes()[i].norm_sqr()).sum::<f64>() / n2
        }
        Subspace::Vector(v) => {
            let v2 = v.norm_sqr();
            if v2 == 0.0 {
                return Err(QuantumError::ZeroNorm.into());
            }
            v.inner(state)?.norm_sqr() / (v2 * n2)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Population of all states with at least one cavity photon.
pub fn photon_population(state: &StateVector) -> Result<f64> {
    let n2 = state.norm_sqr();
    if n2 == 0.0 {
        return Err(QuantumError::ZeroNorm.into());
    }
    let b = state.basis();
    let p: f64 = (0..b.dim()).filter(|&i| b.label(i).photons > 0).map(|i| state.amplitudes()[i].norm_sqr()).sum();
    Ok(p / n2)
}

/// Expectation of the excitation number (excited atoms plus photons) in the
/// normalized state.
pub fn excitation_number(state: &StateVector) -> Result<f64> {
    let n2 = state.norm_sqr();
    if n2 == 0.0 {
        return Err(QuantumError::ZeroNorm.into());
    }
    let b = state.basis();
    let e: f64 = (0..b.dim()).map(|i| b.excitation(i) as f64 * state.amplitudes()[i].norm_sqr()).sum();
    Ok(e / n2)
}
