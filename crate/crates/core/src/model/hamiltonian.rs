use std::sync::Arc;

use ndarray::Array2;

use super::{check_rate, ModelError, Result};
use crate::quantum::{Basis, Operator, C64, I};

/// Two-level rates after adiabatic elimination of the excited level of a
/// Λ system at large detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveParams {
    pub g_tilde: Vec<f64>,
    pub gamma_tilde: Vec<f64>,
    pub kappa_tilde: f64,
}

/// `g~ = Ω g / 2Δ`, `Γ~ = (Ω / 2Δ)^2 Γ`, `κ~ = κ`.
pub fn effective_params(gs: &[f64], omegas: &[f64], delta: f64, gamma: f64, kappa: f64) -> Result<EffectiveParams> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(ModelError::ZeroDetuning);
    }
    if gs.len() != omegas.len() {
        return Err(ModelError::AtomCount { expected: gs.len(), found: omegas.len() });
    }
    check_rate("gamma", gamma)?;
    check_rate("kappa", kappa)?;
    let ratio: Vec<f64> = omegas.iter().map(|o| o / (2.0 * delta)).collect();
    Ok(EffectiveParams {
        g_tilde: ratio.iter().zip(gs).map(|(r, g)| r * g).collect(),
        gamma_tilde: ratio.iter().map(|r| r * r * gamma).collect(),
        kappa_tilde: kappa,
    })
}

fn check_basis(basis: &Basis, levels: u8, per_atom: &[&[f64]]) -> Result<()> {
    if basis.levels_per_atom() != levels {
        return Err(ModelError::LevelMismatch { expected: levels, found: basis.levels_per_atom() });
    }
    for values in per_atom {
        if values.len() != basis.num_atoms() {
            return Err(ModelError::AtomCount { expected: basis.num_atoms(), found: values.len() });
        }
    }
    Ok(())
}

/// Two-level conditional Hamiltonian
/// `i Σ g_i b |2><1|_i + h.c. - (i/2) Σ Γ_i |2><2|_i - (i/2) κ b†b`
/// written into `out` (overwritten).
pub(crate) fn fill_two_level(gs: &[f64], level2_decay: Option<&[f64]>, kappa: f64, basis: &Basis, out: &mut Array2<C64>) {
    out.fill(C64::new(0.0, 0.0));
    for from in 0..basis.dim() {
        let label = basis.label(from);
        let n = label.photons;
        let mut diag = C64::new(0.0, -0.5 * kappa * n as f64);
        for (atom, &l) in label.levels.iter().enumerate() {
            if l == 2 {
                if let Some(decay) = level2_decay {
                    diag -= I * 0.5 * decay[atom];
                }
            } else if n > 0 {
                // b |2><1|: atom up, photon absorbed
                let to = basis.neighbour(from, atom, 2, -1).expect("state in basis");
                let amp = I * gs[atom] * (n as f64).sqrt();
                out[[to, from]] += amp;
                out[[from, to]] += amp.conj();
            }
        }
        out[[from, from]] += diag;
    }
}

/// `i Σ g_i b |2><1|_i + h.c.`
pub fn build_h_int(gs: &[f64], basis: &Arc<Basis>) -> Result<Operator> {
    check_basis(basis, 2, &[gs])?;
    let mut op = Operator::zeros(basis.clone());
    fill_two_level(gs, None, 0.0, basis, op.matrix_mut());
    Ok(op)
}

/// `H_int - (i/2) κ b†b`
pub fn build_h_cond_two_level(gs: &[f64], kappa: f64, basis: &Arc<Basis>) -> Result<Operator> {
    check_rate("kappa", kappa)?;
    check_basis(basis, 2, &[gs])?;
    let mut op = Operator::zeros(basis.clone());
    fill_two_level(gs, None, kappa, basis, op.matrix_mut());
    Ok(op)
}

pub fn fill_h_eff(effective: &EffectiveParams, basis: &Basis, out: &mut Array2<C64>) {
    fill_two_level(&effective.g_tilde, Some(&effective.gamma_tilde), effective.kappa_tilde, basis, out);
}

/// Effective two-level conditional Hamiltonian with decaying level 2.
pub fn build_h_eff(effective: &EffectiveParams, basis: &Arc<Basis>) -> Result<Operator> {
    check_basis(basis, 2, &[&effective.g_tilde, &effective.gamma_tilde])?;
    let mut op = Operator::zeros(basis.clone());
    fill_h_eff(effective, basis, op.matrix_mut());
    Ok(op)
}

/// Λ-system conditional Hamiltonian
/// `Σ [Ω_i/2 |2><3|_i + i g_i b |3><1|_i + h.c.] + (Δ - iΓ/2) Σ |3><3|_i - (i/2) κ b†b`
/// written into `out` (overwritten).
#[allow(clippy::too_many_arguments)]
pub fn fill_h_cond_lambda(
    gs: &[f64],
    omegas: &[f64],
    delta: f64,
    gamma: f64,
    kappa: f64,
    basis: &Basis,
    out: &mut Array2<C64>,
) {
    out.fill(C64::new(0.0, 0.0));
    let level3 = C64::new(delta, -0.5 * gamma);
    for from in 0..basis.dim() {
        let label = basis.label(from);
        let n = label.photons;
        let mut diag = C64::new(0.0, -0.5 * kappa * n as f64);
        for (atom, &l) in label.levels.iter().enumerate() {
            match l {
                1 if n > 0 => {
                    let to = basis.neighbour(from, atom, 3, -1).expect("state in basis");
                    let amp = I * gs[atom] * (n as f64).sqrt();
                    out[[to, from]] += amp;
                    out[[from, to]] += amp.conj();
                }
                2 => {
                    let to = basis.neighbour(from, atom, 3, 0).expect("state in basis");
                    let amp = C64::new(0.5 * omegas[atom], 0.0);
                    out[[from, to]] += amp;
                    out[[to, from]] += amp;
                }
                3 => diag += level3,
                _ => {}
            }
        }
        out[[from, from]] += diag;
    }
}

pub fn build_h_cond_lambda(
    gs: &[f64],
    omegas: &[f64],
    delta: f64,
    gamma: f64,
    kappa: f64,
    basis: &Arc<Basis>,
) -> Result<Operator> {
    check_rate("gamma", gamma)?;
    check_rate("kappa", kappa)?;
    if !delta.is_finite() {
        return Err(ModelError::Invalid("detuning must be finite".into()));
    }
    check_basis(basis, 3, &[gs, omegas])?;
    let mut op = Operator::zeros(basis.clone());
    fill_h_cond_lambda(gs, omegas, delta, gamma, kappa, basis, op.matrix_mut());
    Ok(op)
}
