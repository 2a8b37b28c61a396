use ndarray::Array2;

use super::C64;

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic complex
/// Jacobi rotations. Only the Hermitian part of the input is used.
pub fn hermitian_eigenvalues(m: &Array2<C64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| (m[[i, j]] + m[[j, i]].conj()) * 0.5);
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // phase q so that a[p][q] becomes real and positive
                let phase = apq / mag;
                for k in 0..n {
                    a[[k, q]] *= phase.conj();
                }
                for k in 0..n {
                    a[[q, k]] *= phase;
                }
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (kp, kq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = kp * c - kq * s;
                    a[[k, q]] = kp * s + kq * c;
                }
                for k in 0..n {
                    let (pk, qk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = pk * c - qk * s;
                    a[[q, k]] = pk * s + qk * c;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    evs.sort_by(|x, y| x.total_cmp(y));
    evs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let m = Array2::from_diag(&ndarray::arr1(&[C64::new(3.0, 0.0), C64::new(-1.0, 0.0), C64::new(2.0, 0.0)]));
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y() {
        let m = ndarray::arr2(&[[C64::new(0.0, 0.0), C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]]);
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let n = 7;
        let m = Array2::from_shape_fn((n, n), |(i, j)| {
            let x = (i * 31 + j * 17) as f64;
            C64::new((x * 0.37).sin(), (x * 0.11).cos())
        });
        let h = Array2::from_shape_fn((n, n), |(i, j)| (m[[i, j]] + m[[j, i]].conj()) * 0.5);
        let ev = hermitian_eigenvalues(&h);
        let tr: f64 = (0..n).map(|i| h[[i, i]].re).sum();
        let fro: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-12);
        assert!((ev.iter().map(|e| e * e).sum::<f64>() - fro).abs() < 1e-11);
    }
}
