use ndarray::Array2;

use super::{Operator, QuantumError, Result, C64, I};

/// Scaled argument norm below which the Taylor series is summed directly.
const SERIES_RADIUS: f64 = 0.25;
const MAX_TERMS: usize = 40;

fn one_norm(a: &Array2<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > SERIES_RADIUS { (norm / SERIES_RADIUS).log2().ceil() as i32 } else { 0 };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings));

    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=MAX_TERMS {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        sum += &term;
        if one_norm(&term) <= f64::EPSILON * 1e-2 * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// `exp(-i H dt)` for a constant (possibly non-Hermitian) generator.
pub fn propagator(h: &Operator, dt: f64) -> Result<Operator> {
    if !dt.is_finite() || !h.is_finite() {
        return Err(QuantumError::NonFinite);
    }
    let a = h.matrix().mapv(|z| -I * z * dt);
    Operator::new(h.basis().clone(), expm(&a))
}
