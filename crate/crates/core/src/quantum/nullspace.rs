use ndarray::{Array1, Array2};

use super::operator::frobenius;
use super::{Operator, QuantumError, Result, StateVector, C64};

/// Relative rank threshold used when none is given.
pub const DEFAULT_NULL_TOL: f64 = 1e-10;

/// Orthonormal basis of the numerical kernel of a (possibly rectangular)
/// matrix: column-pivoted Householder QR, back substitution for the free
/// columns, then two passes of modified Gram-Schmidt.
///
/// Columns whose pivoted remainder is at most `tol * ||m||_F` count as
/// dependent.
pub fn null_space_matrix(m: &Array2<C64>, tol: f64) -> Vec<Array1<C64>> {
    let (rows, cols) = m.dim();
    let threshold = tol * frobenius(m);
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;

    for k in 0..rows.min(cols) {
        let (pivot, pivot_norm) = (k..cols)
            .map(|j| (j, (k..rows).map(|i| a[[i, j]].norm_sqr()).sum::<f64>().sqrt()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_norm <= threshold {
            break;
        }
        if pivot != k {
            perm.swap(k, pivot);
            for i in 0..rows {
                a.swap([i, k], [i, pivot]);
            }
        }
        // Householder reflector mapping a[k.., k] onto a multiple of e_k
        let x0 = a[[k, k]];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * pivot_norm;
        let mut v: Vec<C64> = (k..rows).map(|i| a[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|z| *z /= vnorm);
            for j in k..cols {
                let dot: C64 = v.iter().enumerate().map(|(r, vi)| vi.conj() * a[[k + r, j]]).sum();
                for (r, vi) in v.iter().enumerate() {
                    a[[k + r, j]] -= *vi * dot * 2.0;
                }
            }
        }
        rank += 1;
    }

    let mut basis = Vec::with_capacity(cols - rank);
    for free in rank..cols {
        let mut z = vec![C64::new(0.0, 0.0); cols];
        z[free] = C64::new(1.0, 0.0);
        for i in (0..rank).rev() {
            let mut acc = -a[[i, free]];
            for j in (i + 1)..rank {
                acc -= a[[i, j]] * z[j];
            }
            z[i] = acc / a[[i, i]];
        }
        let mut v = Array1::zeros(cols);
        for (i, &p) in perm.iter().enumerate() {
            v[p] = z[i];
        }
        basis.push(v);
    }
    orthonormalize(basis)
}

fn orthonormalize(mut vs: Vec<Array1<C64>>) -> Vec<Array1<C64>> {
    for _pass in 0..2 {
        for i in 0..vs.len() {
            let (done, rest) = vs.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let proj: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v.zip_mut_with(u, |x, &y| *x -= proj * y);
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.mapv_inplace(|z| z / n);
        }
    }
    vs
}

/// Orthonormal states spanning the kernel of `m`.
pub fn null_space(m: &Operator, tol: f64) -> Result<Vec<StateVector>> {
    if !m.is_finite() || !tol.is_finite() {
        return Err(QuantumError::NonFinite);
    }
    null_space_matrix(m.matrix(), tol)
        .into_iter()
        .map(|v| StateVector::new(m.basis().clone(), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let ns = null_space_matrix(&Array2::zeros((4, 4)), DEFAULT_NULL_TOL);
        assert_eq!(ns.len(), 4);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = Array2::from_shape_fn((3, 3), |(i, j)| if i == j { c(1.0 + i as f64) } else { c(0.1) });
        assert!(null_space_matrix(&m, DEFAULT_NULL_TOL).is_empty());
    }

    #[test]
    fn rectangular_rank_one() {
        // one row: kernel is the orthogonal complement of its conjugate
        let m = ndarray::arr2(&[[c(1.0), C64::new(0.0, 2.0), c(-1.0)]]);
        let ns = null_space_matrix(&m, DEFAULT_NULL_TOL);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.dot(v).iter().all(|z| z.norm() < 1e-14));
        }
    }
}
