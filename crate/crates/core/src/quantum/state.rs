use std::sync::Arc;

use ndarray::Array1;

use super::{Basis, Label, QuantumError, Result, C64};

/// Complex amplitudes over a [`Basis`]. Not necessarily normalized: the
/// no-photon evolution shrinks the norm.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Arc<Basis>,
    amps: Array1<C64>,
}

impl StateVector {
    pub fn new(basis: Arc<Basis>, amps: Array1<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(QuantumError::DimensionMismatch { expected: basis.dim(), found: amps.len() });
        }
        Ok(Self { basis, amps })
    }

    pub fn zeros(basis: Arc<Basis>) -> Self {
        let amps = Array1::zeros(basis.dim());
        Self { basis, amps }
    }

    pub fn basis_state(basis: Arc<Basis>, label: &Label) -> Result<Self> {
        let i = basis.index_of(label)?;
        let mut s = Self::zeros(basis);
        s.amps[i] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Linear combination of labelled basis states.
    pub fn from_terms(basis: Arc<Basis>, terms: &[(Label, C64)]) -> Result<Self> {
        let mut s = Self::zeros(basis);
        for (label, c) in terms {
            let i = s.basis.index_of(label)?;
            s.amps[i] += *c;
        }
        Ok(s)
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut Array1<C64> {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Array1<C64> {
        self.amps
    }

    pub fn amplitude(&self, label: &Label) -> Result<C64> {
        Ok(self.amps[self.basis.index_of(label)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QuantumError::ZeroNorm);
        }
        Ok(Self { basis: self.basis.clone(), amps: self.amps.mapv(|a| a / n) })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.basis != other.basis {
            return Err(QuantumError::BasisMismatch);
        }
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { basis: self.basis.clone(), amps: self.amps.mapv(|a| a * c) }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}
