use std::f64::consts::SQRT_2;
use std::sync::Arc;

use ndarray::Array2;

use super::{AnalysisError, Result};
use crate::model::build_h_cond_two_level;
use crate::quantum::{expm, spectral_norm, Basis, Label, StateVector, C64, I};

fn radius(g1: f64, g2: f64) -> Result<f64> {
    let r = g1.hypot(g2);
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(AnalysisError::ZeroCoupling)
    }
}

fn two_atom_basis() -> Arc<Basis> {
    Arc::new(Basis::new(2, 2, 1).expect("valid basis"))
}

fn check_two_atom(basis: &Basis) -> Result<()> {
    if basis.num_atoms() != 2 || basis.levels_per_atom() != 2 || basis.photon_cutoff() < 1 {
        return Err(AnalysisError::Basis { atoms: 2 });
    }
    Ok(())
}

/// `|12;0>, |21;0>, |11;1>`
pub fn single_excitation_labels() -> [Label; 3] {
    [Label::new(&[1, 2], 0), Label::new(&[2, 1], 0), Label::new(&[1, 1], 1)]
}

/// Conditional Hamiltonian restricted to the single-excitation states of
/// two atoms, ordered as [`single_excitation_labels`].
pub fn single_excitation_block(g1: f64, g2: f64, kappa: f64) -> Result<Array2<C64>> {
    let basis = two_atom_basis();
    let h = build_h_cond_two_level(&[g1, g2], kappa, &basis)?;
    let idx: Vec<usize> = single_excitation_labels().iter().map(|l| basis.index_of(l)).collect::<std::result::Result<_, _>>()?;
    Ok(h.block(&idx))
}

/// `(g1 |12;0> - g2 |21;0>) / R` in the two-atom basis with one photon.
pub fn dark_state(g1: f64, g2: f64) -> Result<StateVector> {
    dark_state_in(g1, g2, &two_atom_basis())
}

pub fn dark_state_in(g1: f64, g2: f64, basis: &Arc<Basis>) -> Result<StateVector> {
    check_two_atom(basis)?;
    let r = radius(g1, g2)?;
    let [a, b, _] = single_excitation_labels();
    Ok(StateVector::from_terms(basis.clone(), &[(a, C64::new(g1 / r, 0.0)), (b, C64::new(-g2 / r, 0.0))])?)
}

#[derive(Clone, Debug)]
pub struct BrightEigensystem {
    pub lambda2: C64,
    pub lambda3: C64,
    /// `(g2|12;0> + g1|21;0> ± iR|11;1>) / (√2 R)`, only for `κ = 0`.
    pub vectors: Option<[StateVector; 2]>,
}

/// `λ2,3 = -iκ/4 ∓ sqrt(R² - κ²/16)` with the principal square root.
pub fn bright_eigensystem(g1: f64, g2: f64, kappa: f64) -> Result<BrightEigensystem> {
    let r = radius(g1, g2)?;
    let root = C64::new(r * r - kappa * kappa / 16.0, 0.0).sqrt();
    let centre = -I * (kappa / 4.0);
    let vectors = if kappa == 0.0 {
        let basis = two_atom_basis();
        let [a, b, c] = single_excitation_labels();
        let n = SQRT_2 * r;
        let make = |sign: f64| {
            StateVector::from_terms(
                basis.clone(),
                &[
                    (a.clone(), C64::new(g2 / n, 0.0)),
                    (b.clone(), C64::new(g1 / n, 0.0)),
                    (c.clone(), C64::new(0.0, sign * r / n)),
                ],
            )
        };
        Some([make(1.0)?, make(-1.0)?])
    } else {
        None
    };
    Ok(BrightEigensystem { lambda2: centre - root, lambda3: centre + root, vectors })
}

/// `R = sqrt(g1² + g2²)`, `S = (ġ1 g2 - ġ2 g1) / (√2 R²)`.
pub fn rates_r_s(g1: f64, g2: f64, dg1: f64, dg2: f64) -> Result<(f64, f64)> {
    let r = radius(g1, g2)?;
    Ok((r, (dg1 * g2 - dg2 * g1) / (SQRT_2 * r * r)))
}

/// First-order elimination in the `η` frame: `(c2, c3) = (-κS c1/(√2R²), √2 S c1/R)`.
pub fn eliminated_amplitudes(c1: C64, r: f64, s: f64, kappa: f64) -> Result<(C64, C64)> {
    if !(r > 0.0) {
        return Err(AnalysisError::ZeroCoupling);
    }
    Ok((c1 * (-kappa * s / (SQRT_2 * r * r)), c1 * (SQRT_2 * s / r)))
}

/// First-order elimination in the `κ = 0` eigenbasis: `c2 = -c3 = -iS c1/R`.
pub fn eliminated_eigen_amplitudes(c1: C64, r: f64, s: f64) -> Result<(C64, C64)> {
    if !(r > 0.0) {
        return Err(AnalysisError::ZeroCoupling);
    }
    let c2 = -I * c1 * (s / r);
    Ok((c2, -c2))
}

/// Instantaneous frame of the two-atom single-excitation sector.
#[derive(Clone, Debug)]
pub struct AdiabaticFrame {
    pub r: f64,
    pub s: f64,
    pub lambdas: [C64; 3],
    /// `η1` (dark), `η2 = (g2|12;0> + g1|21;0>)/R`, `η3 = |11;1>`.
    pub eta: [StateVector; 3],
}

impl AdiabaticFrame {
    pub fn new(g1: f64, g2: f64, dg1: f64, dg2: f64, kappa: f64, basis: &Arc<Basis>) -> Result<Self> {
        check_two_atom(basis)?;
        let (r, s) = rates_r_s(g1, g2, dg1, dg2)?;
        let bright = bright_eigensystem(g1, g2, kappa)?;
        let [a, b, c] = single_excitation_labels();
        let eta2 = StateVector::from_terms(basis.clone(), &[(a, C64::new(g2 / r, 0.0)), (b, C64::new(g1 / r, 0.0))])?;
        let eta3 = StateVector::basis_state(basis.clone(), &c)?;
        Ok(Self {
            r,
            s,
            lambdas: [C64::new(0.0, 0.0), bright.lambda2, bright.lambda3],
            eta: [dark_state_in(g1, g2, basis)?, eta2, eta3],
        })
    }

    /// `c_j = <η_j|ψ>`
    pub fn coefficients(&self, psi: &StateVector) -> Result<[C64; 3]> {
        Ok([self.eta[0].inner(psi)?, self.eta[1].inner(psi)?, self.eta[2].inner(psi)?])
    }
}

/// `F = 1/2 + g1 g2 / (g1² + g2²)`: overlap of the frozen dark state with
/// `(|12> - |21>)/√2` when the atoms stop early.
pub fn stop_fidelity(g1: f64, g2: f64) -> Result<f64> {
    let r = radius(g1, g2)?;
    Ok(0.5 + g1 * g2 / (r * r))
}

/// `|| exp(-i H dt) - |λ1><λ1| ||_2` on the single-excitation block with
/// frozen couplings.
pub fn zeno_projector_distance(g1: f64, g2: f64, kappa: f64, dt: f64) -> Result<f64> {
    let r = radius(g1, g2)?;
    if !(dt >= 0.0 && dt.is_finite()) || kappa < 0.0 {
        return Err(AnalysisError::Invalid(format!("need dt >= 0 and kappa >= 0, got dt={dt}, kappa={kappa}")));
    }
    let h = single_excitation_block(g1, g2, kappa)?;
    let u = expm(&h.mapv(|z| -I * z * dt));
    let d = [g1 / r, -g2 / r, 0.0];
    let p = Array2::from_shape_fn((3, 3), |(i, j)| C64::new(d[i] * d[j], 0.0));
    Ok(spectral_norm(&(u - p)))
}
