use std::f64::consts::SQRT_2;
use std::sync::Arc;

use ndarray::{Array1, Array2};

use super::{AnalysisError, Result};
use crate::model::{effective_params, Scheme, SystemConfig};
use crate::quantum::{null_space_matrix, Basis, Label, StateVector, C64, DEFAULT_NULL_TOL};

/// Orthonormal basis of the decoherence-free subspace, grouped by the number
/// of atoms in level 2.
#[derive(Clone, Debug)]
pub struct DFBasis {
    pub basis: Arc<Basis>,
    /// Collective couplings `c_i` of the emission channel `Σ c_i |1><2|_i`.
    pub couplings: Vec<f64>,
    pub vectors: Vec<StateVector>,
    pub excitations: Vec<usize>,
}

impl DFBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn sector_dim(&self, excitation: usize) -> usize {
        self.excitations.iter().filter(|&&e| e == excitation).count()
    }

    pub fn sector(&self, excitation: usize) -> Vec<&StateVector> {
        self.vectors.iter().zip(&self.excitations).filter(|(_, &e)| e == excitation).map(|(v, _)| v).collect()
    }

    /// `|| Σ c_i |1><2|_i v ||`, largest over the basis.
    pub fn emission_residual(&self) -> f64 {
        self.vectors.iter().map(|v| lowered(v, &self.couplings).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }

    /// Population of `psi` inside the subspace.
    pub fn population(&self, psi: &StateVector) -> Result<f64> {
        let n2 = psi.norm_sqr();
        if n2 == 0.0 {
            return Err(crate::quantum::QuantumError::ZeroNorm.into());
        }
        let mut p = 0.0;
        for v in &self.vectors {
            p += v.inner(psi)?.norm_sqr();
        }
        Ok(p / n2)
    }
}

fn lowered(v: &StateVector, couplings: &[f64]) -> Vec<C64> {
    let b = v.basis();
    let mut out = vec![C64::default(); b.dim()];
    for (from, amp) in v.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        for (atom, &c) in couplings.iter().enumerate() {
            if b.label(from).levels[atom] == 2 {
                let to = b.neighbour(from, atom, 1, 0).expect("state in basis");
                out[to] += amp * c;
            }
        }
    }
    out
}

fn atomic_states(basis: &Basis, twos: usize) -> Vec<usize> {
    (0..basis.dim())
        .filter(|&i| {
            let l = basis.label(i);
            l.photons == 0 && l.levels.iter().all(|&x| x <= 2) && l.levels.iter().filter(|&&x| x == 2).count() == twos
        })
        .collect()
}

/// States free of photon emission at the given couplings: zero photons, no
/// population in level 3, annihilated by `Σ c_i |1><2|_i`. For two-level
/// atoms `c_i = g_i`; for Λ atoms the effective couplings `Ω_i g_i / 2Δ`
/// are used. Vectors live in a basis with the config's photon cutoff
/// (default 1).
pub fn df_subspace(config: &SystemConfig, gs: &[f64], omegas: &[f64]) -> Result<DFBasis> {
    config.validate()?;
    let n = config.num_atoms;
    if gs.len() != n {
        return Err(AnalysisError::Invalid(format!("expected {n} couplings, got {}", gs.len())));
    }
    let couplings = match config.scheme {
        Scheme::TwoLevelDirect => gs.to_vec(),
        Scheme::Lambda | Scheme::EffectiveTwoLevel => {
            effective_params(gs, omegas, config.delta, config.gamma, config.kappa)?.g_tilde
        }
    };
    let basis = Arc::new(Basis::new(n, config.scheme.levels_per_atom(), config.photon_cutoff.unwrap_or(1))?);
    let mut vectors = Vec::new();
    let mut excitations = Vec::new();
    for k in 0..=n {
        let cols = atomic_states(&basis, k);
        let kernel: Vec<Array1<C64>> = if k == 0 {
            vec![Array1::from(vec![C64::new(1.0, 0.0)])]
        } else {
            let rows = atomic_states(&basis, k - 1);
            let mut m = Array2::<C64>::zeros((rows.len(), cols.len()));
            for (j, &from) in cols.iter().enumerate() {
                for (atom, &c) in couplings.iter().enumerate() {
                    if basis.label(from).levels[atom] == 2 {
                        let to = basis.neighbour(from, atom, 1, 0).expect("state in basis");
                        let i = rows.iter().position(|&r| r == to).expect("lowered state in sector");
                        m[[i, j]] += C64::new(c, 0.0);
                    }
                }
            }
            null_space_matrix(&m, DEFAULT_NULL_TOL)
        };
        for w in kernel {
            let mut amps = Array1::<C64>::zeros(basis.dim());
            for (&idx, a) in cols.iter().zip(w.iter()) {
                amps[idx] = *a;
            }
            vectors.push(StateVector::new(basis.clone(), amps)?);
            excitations.push(k);
        }
    }
    Ok(DFBasis { basis, couplings, vectors, excitations })
}

/// `(|121;0> + |211;0>)/√2`: atoms 1 and 2 in the symmetric state, atom 3 in 1.
pub fn symmetric_target(basis: &Arc<Basis>) -> Result<StateVector> {
    let c = C64::new(1.0 / SQRT_2, 0.0);
    Ok(StateVector::from_terms(basis.clone(), &[(Label::new(&[1, 2, 1], 0), c), (Label::new(&[2, 1, 1], 0), c)])?)
}

#[derive(Clone, Debug)]
pub struct ThreeAtomDecomposition {
    pub eta12: Option<StateVector>,
    pub eta13: Option<StateVector>,
    pub eta23: Option<StateVector>,
    /// `(η13 + η23)/√2` when both exist.
    pub superposition: Option<StateVector>,
    /// Coefficients of `|112;0>` and `|s1;0>`:
    /// `((g1 + g2), -√2 g3) / sqrt(g1² + g2² + 2 g3²)`.
    pub coefficients: (f64, f64),
    /// The state with those coefficients.
    pub expansion: StateVector,
}

impl ThreeAtomDecomposition {
    /// `|| superposition - expansion ||`; zero when `g1 = g2`.
    pub fn residual(&self) -> Option<f64> {
        let s = self.superposition.as_ref()?;
        let d = s.amplitudes() - self.expansion.amplitudes();
        Some(d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    }
}

fn pair(basis: &Arc<Basis>, a: (f64, [u8; 3]), b: (f64, [u8; 3])) -> Result<Option<StateVector>> {
    let n = a.0.hypot(b.0);
    if n == 0.0 {
        return Ok(None);
    }
    let v = StateVector::from_terms(
        basis.clone(),
        &[(Label::new(&a.1, 0), C64::new(a.0 / n, 0.0)), (Label::new(&b.1, 0), C64::new(-b.0 / n, 0.0))],
    )?;
    Ok(Some(v))
}

/// Pairwise dark states of three Λ atoms sharing one excitation in level 2
/// and the expansion of `|112;0>` in terms of `|s1;0>`.
pub fn three_atom_df_decomposition(g1: f64, g2: f64, g3: f64) -> Result<ThreeAtomDecomposition> {
    if g1 == 0.0 && g2 == 0.0 && g3 == 0.0 {
        return Err(AnalysisError::ZeroCoupling);
    }
    let basis = Arc::new(Basis::new(3, 3, 1)?);
    let eta12 = pair(&basis, (g1, [1, 2, 1]), (g2, [2, 1, 1]))?;
    let eta13 = pair(&basis, (g1, [1, 1, 2]), (g3, [2, 1, 1]))?;
    let eta23 = pair(&basis, (g2, [1, 1, 2]), (g3, [1, 2, 1]))?;
    let superposition = match (&eta13, &eta23) {
        (Some(a), Some(b)) => {
            Some(StateVector::new(basis.clone(), (a.amplitudes() + b.amplitudes()).mapv(|z| z / SQRT_2))?)
        }
        _ => None,
    };
    let norm = (g1 * g1 + g2 * g2 + 2.0 * g3 * g3).sqrt();
    let coefficients = ((g1 + g2) / norm, -SQRT_2 * g3 / norm);
    let s1 = symmetric_target(&basis)?;
    let mut amps = s1.amplitudes().mapv(|z| z * coefficients.1);
    amps[basis.index_of(&Label::new(&[1, 1, 2], 0))?] += coefficients.0;
    let expansion = StateVector::new(basis, amps)?;
    Ok(ThreeAtomDecomposition { eta12, eta13, eta23, superposition, coefficients, expansion })
}
