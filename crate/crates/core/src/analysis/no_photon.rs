use super::{rates_r_s, AnalysisError, Result};
use crate::model::{CouplingProfile, Trajectory};

const MIN_INTERVALS: usize = 512;
const MAX_INTERVALS: usize = 1 << 24;
const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-15;

/// `(R, S)` of atoms 1 and 2 at time `t`, with `ġ = g'(x) v`.
pub fn rates_along(trajectory: &Trajectory, profile: &CouplingProfile, t: f64) -> Result<(f64, f64)> {
    let (g, dg) = couplings_and_rates(trajectory, profile, t)?;
    rates_r_s(g[0], g[1], dg[0], dg[1])
}

fn couplings_and_rates(trajectory: &Trajectory, profile: &CouplingProfile, t: f64) -> Result<([f64; 2], [f64; 2])> {
    if trajectory.num_atoms() != 2 {
        return Err(AnalysisError::Invalid(format!("need two atoms, trajectory has {}", trajectory.num_atoms())));
    }
    let x = trajectory.positions_at(t);
    let v = trajectory.velocities_at(t);
    Ok(([profile.at(x[0]), profile.at(x[1])], [profile.slope(x[0]) * v[0], profile.slope(x[1]) * v[1]]))
}

/// `(ġ1 g2 - ġ2 g1)² / R⁶ = 2 S² / R²`; zero where both couplings underflow.
fn integrand(trajectory: &Trajectory, profile: &CouplingProfile, t: f64) -> Result<f64> {
    let ([g1, g2], [d1, d2]) = couplings_and_rates(trajectory, profile, t)?;
    let r2 = g1 * g1 + g2 * g2;
    let r6 = r2 * r2 * r2;
    if r6 == 0.0 {
        return Ok(0.0);
    }
    let num = d1 * g2 - d2 * g1;
    Ok(num * num / r6)
}

fn simpson(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut n = MIN_INTERVALS;
    let (fa, fb) = (f(a)?, f(b)?);
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    for k in (1..n).step_by(2) {
        odd += f(a + k as f64 * h)?;
    }
    let mut even = 0.0;
    for k in (2..n).step_by(2) {
        even += f(a + k as f64 * h)?;
    }
    let mut previous = (fa + fb + 4.0 * odd + 2.0 * even) * h / 3.0;
    while n < MAX_INTERVALS {
        // old nodes all become even nodes; new odd nodes sit at the midpoints
        n *= 2;
        let h = (b - a) / n as f64;
        even += odd;
        odd = 0.0;
        for k in (1..n).step_by(2) {
            odd += f(a + k as f64 * h)?;
        }
        let current = (fa + fb + 4.0 * odd + 2.0 * even) * h / 3.0;
        if (current - previous).abs() <= RTOL * current.abs() + ATOL {
            return Ok(current);
        }
        previous = current;
    }
    let current = previous;
    Err(AnalysisError::Quadrature { previous, current })
}

/// `∫_0^T (ġ1 g2 - ġ2 g1)² / R⁶ dt` split at the trajectory's stop time.
fn transfer_integral(trajectory: &Trajectory, profile: &CouplingProfile, t_final: f64) -> Result<f64> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(AnalysisError::Invalid(format!("final time must be >= 0, got {t_final}")));
    }
    let f = |t: f64| integrand(trajectory, profile, t);
    let end = trajectory.stop_time().map_or(t_final, |ts| ts.min(t_final));
    simpson(&f, 0.0, end)
}

/// `c1(T) = exp(-κ ∫ S²/R² dt)`, the dark-state amplitude after adiabatic
/// elimination of the bright components.
pub fn dark_amplitude_decay(trajectory: &Trajectory, profile: &CouplingProfile, kappa: f64, t_final: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if kappa == 0.0 {
        return Ok(1.0);
    }
    Ok((-0.5 * kappa * transfer_integral(trajectory, profile, t_final)?).exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoPhotonEstimate {
    /// `∫ (ġ1 g2 - ġ2 g1)² / R⁶ dt`
    pub integral: f64,
    /// `exp(-κ I)`
    pub exponential: f64,
    /// `1 - κ I`
    pub linearized: f64,
}

/// No-photon probability to first order in `κ/R`.
pub fn analytic_no_photon_probability(
    trajectory: &Trajectory,
    profile: &CouplingProfile,
    kappa: f64,
    t_final: f64,
) -> Result<NoPhotonEstimate> {
    check_kappa(kappa)?;
    let integral = if kappa == 0.0 { 0.0 } else { transfer_integral(trajectory, profile, t_final)? };
    Ok(NoPhotonEstimate { integral, exponential: (-kappa * integral).exp(), linearized: 1.0 - kappa * integral })
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa >= 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::Invalid(format!("kappa must be >= 0, got {kappa}")))
    }
}
