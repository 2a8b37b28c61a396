use std::sync::Arc;

use ndarray::{Array2, Zip};

use super::{eigen, Basis, QuantumError, Result, StateVector, C64};

/// Dense square matrix acting on states of one [`Basis`]. Generally
/// non-Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    basis: Arc<Basis>,
    mat: Array2<C64>,
}

impl Operator {
    pub fn new(basis: Arc<Basis>, mat: Array2<C64>) -> Result<Self> {
        let d = basis.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(QuantumError::DimensionMismatch { expected: d, found: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self { basis, mat })
    }

    pub fn zeros(basis: Arc<Basis>) -> Self {
        let d = basis.dim();
        Self { basis, mat: Array2::zeros((d, d)) }
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let d = basis.dim();
        Self { basis, mat: Array2::eye(d) }
    }

    /// `|a><b|`
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        if a.basis() != b.basis() {
            return Err(QuantumError::BasisMismatch);
        }
        let d = a.basis().dim();
        let mat = Array2::from_shape_fn((d, d), |(i, j)| a.amplitudes()[i] * b.amplitudes()[j].conj());
        Ok(Self { basis: a.basis().clone(), mat })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<C64> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.basis() != &self.basis {
            return Err(QuantumError::BasisMismatch);
        }
        StateVector::new(self.basis.clone(), self.mat.dot(psi.amplitudes()))
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.basis != self.basis {
            return Err(QuantumError::BasisMismatch);
        }
        Ok(Self { basis: self.basis.clone(), mat: self.mat.dot(&rhs.mat) })
    }

    pub fn adjoint(&self) -> Self {
        Self { basis: self.basis.clone(), mat: self.mat.t().mapv(|z| z.conj()) }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a - b)
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { basis: self.basis.clone(), mat: self.mat.mapv(|z| z * c) }
    }

    fn combine(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if rhs.basis != self.basis {
            return Err(QuantumError::BasisMismatch);
        }
        let mut mat = self.mat.clone();
        Zip::from(&mut mat).and(&rhs.mat).for_each(|a, &b| *a = f(*a, b));
        Ok(Self { basis: self.basis.clone(), mat })
    }

    /// `[self, rhs]`
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// `(H + H†)/2`
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).expect("same basis").scaled(C64::new(0.5, 0.0))
    }

    /// `(H - H†)/(2i)`: Hermitian, negative semidefinite for a conditional
    /// Hamiltonian with non-negative decay rates.
    pub fn decay_part(&self) -> Self {
        self.sub(&self.adjoint()).expect("same basis").scaled(C64::new(0.0, -0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.mat)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.mat)
    }

    /// Sub-matrix on the given basis indices (rows and columns).
    pub fn block(&self, indices: &[usize]) -> Array2<C64> {
        Array2::from_shape_fn((indices.len(), indices.len()), |(i, j)| self.mat[[indices[i], indices[j]]])
    }
}

pub(crate) fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn spectral_norm(m: &Array2<C64>) -> f64 {
    let gram = m.t().mapv(|z| z.conj()).dot(m);
    let evs = eigen::hermitian_eigenvalues(&gram);
    evs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}
