//! Fast self-checks comparing closed forms with numerics.

use std::sync::Arc;

use crate::analysis::{
    analytic_no_photon_probability, bright_eigensystem, dark_state, single_excitation_block,
};
use crate::dynamics::{
    fidelity, integrate_conditional, integrate_fixed, no_photon_probability, ConstantGenerator, IntegratorSettings,
};
use crate::experiments::{run, ScenarioSpec};
use crate::model::build_h_cond_two_level;
use crate::quantum::{propagator, Basis, Label, Operator, StateVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidateOptions {
    pub settings: IntegratorSettings,
    /// Added to the closed-form `λ2`; non-zero values must make the
    /// eigenvalue check fail.
    pub eigenvalue_perturbation: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { settings: IntegratorSettings::default(), eigenvalue_perturbation: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Deterministic coupling grid `(g1, g2, κ)`, including `R = κ/4`.
fn grid() -> Vec<(f64, f64, f64)> {
    let mut pts: Vec<(f64, f64, f64)> = (0..24)
        .map(|k| {
            let a = 0.37 + 1.61 * k as f64;
            (0.05 + a.sin().abs(), 0.02 + (1.3 * a).cos().abs(), 0.1 * (k % 7) as f64)
        })
        .collect();
    let r = 0.3_f64.hypot(0.4);
    pts.push((0.3, 0.4, 4.0 * r));
    pts
}

fn msg(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn check<F: FnOnce() -> Result<(bool, String), String>>(name: &'static str, f: F) -> CheckOutcome {
    match f() {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
    }
}

fn two_atom_basis() -> Arc<Basis> {
    Arc::new(Basis::new(2, 2, 1).expect("valid basis"))
}

fn dark_state_stationarity(settings: IntegratorSettings) -> Result<(bool, String), String> {
    let basis = two_atom_basis();
    let mut worst: f64 = 0.0;
    for (g1, g2, kappa) in grid() {
        let h = build_h_cond_two_level(&[g1, g2], kappa, &basis).map_err(msg)?;
        let d = dark_state(g1, g2).map_err(msg)?;
        worst = worst.max(h.apply(&d).map_err(msg)?.norm());
    }
    let (g1, g2, kappa) = (0.6, 0.8, 0.5);
    let h = build_h_cond_two_level(&[g1, g2], kappa, &basis).map_err(msg)?;
    let d = dark_state(g1, g2).map_err(msg)?;
    let r = integrate_conditional(&ConstantGenerator(h), &d, (0.0, 50.0), &settings).map_err(msg)?;
    let f = fidelity(&r.final_state, &d).map_err(msg)?;
    let p0 = no_photon_probability(&r);
    let ok = worst <= 1e-14 && (1.0 - f).abs() <= 1e-9 && (1.0 - p0).abs() <= 1e-9;
    Ok((ok, format!("max |H d| = {worst:.2e}, F = {f:.12}, P0 = {p0:.12}")))
}

/// Compares `0, λ2, λ3` with the characteristic polynomial of the block
/// through its trace, principal-minor sum and determinant.
fn eigenvalue_formulas(perturbation: f64) -> Result<(bool, String), String> {
    let mut worst: f64 = 0.0;
    for (g1, g2, kappa) in grid() {
        let m = single_excitation_block(g1, g2, kappa).map_err(msg)?;
        let e = bright_eigensystem(g1, g2, kappa).map_err(msg)?;
        let (l2, l3) = (e.lambda2 + perturbation, e.lambda3);
        let trace = m[[0, 0]] + m[[1, 1]] + m[[2, 2]];
        let minor = |i: usize, j: usize| m[[i, i]] * m[[j, j]] - m[[i, j]] * m[[j, i]];
        let minors = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let det = m[[0, 0]] * minor(1, 2) - m[[0, 1]] * (m[[1, 0]] * m[[2, 2]] - m[[1, 2]] * m[[2, 0]])
            + m[[0, 2]] * (m[[1, 0]] * m[[2, 1]] - m[[1, 1]] * m[[2, 0]]);
        let scale = 1.0 + g1.hypot(g2) + kappa;
        worst = worst
            .max((trace - (l2 + l3)).norm() / scale)
            .max((minors - l2 * l3).norm() / (scale * scale))
            .max(det.norm() / scale.powi(3));
    }
    Ok((worst <= 1e-10, format!("max invariant mismatch {worst:.2e}")))
}

fn no_photon_formula(settings: IntegratorSettings) -> Result<(bool, String), String> {
    let spec = ScenarioSpec::two_atom_direct(0.5, 0.1, settings).map_err(msg)?;
    let r = run(&spec).map_err(msg)?;
    let c = &spec.config;
    let a = analytic_no_photon_probability(&c.trajectory, &c.coupling, c.kappa, r.duration).map_err(msg)?;
    let diff = (r.p0 - a.exponential).abs();
    Ok((diff <= 0.01, format!("P0 numeric {:.6}, analytic {:.6}, |diff| = {diff:.2e}", r.p0, a.exponential)))
}

/// Fourth-order error decay against the exact propagator, and a converged
/// fast transit reproduced by its half-step run.
fn step_convergence(settings: IntegratorSettings) -> Result<(bool, String), String> {
    let basis = two_atom_basis();
    let h: Operator = build_h_cond_two_level(&[0.7, 0.4], 0.3, &basis).map_err(msg)?;
    let psi = StateVector::basis_state(basis.clone(), &Label::new(&[1, 2], 0)).map_err(msg)?;
    let t = 5.0;
    let exact = propagator(&h, t).map_err(msg)?.apply(&psi).map_err(msg)?;
    let gen = ConstantGenerator(h);
    let err = |dt: f64| -> Result<f64, String> {
        Ok(integrate_fixed(&gen, &psi, (0.0, t), dt, usize::MAX).map_err(msg)?.final_state.max_abs_diff(&exact))
    };
    let (e1, e2) = (err(0.02)?, err(0.01)?);
    let order = (e1 / e2).log2();

    let spec = ScenarioSpec::two_atom_direct(5.0, 0.2, settings).map_err(msg)?;
    let a = run(&spec).map_err(msg)?;
    let half = settings.with_dt(a.evolution.dt_used / 2.0);
    let b = run(&spec.with_settings(half)).map_err(msg)?;
    let (df, dp) = ((a.fidelity - b.fidelity).abs(), (a.p0 - b.p0).abs());
    let ok = (order - 4.0).abs() <= 0.5 && df <= 1e-4 && dp <= 1e-4;
    Ok((ok, format!("order {order:.2}, half-step |dF| = {df:.1e}, |dP0| = {dp:.1e}")))
}

/// Runs every check; the order of the result is fixed.
pub fn run_checks(opts: &ValidateOptions) -> Vec<CheckOutcome> {
    let s = opts.settings;
    vec![
        check("dark_state_stationarity", || dark_state_stationarity(s)),
        check("eigenvalue_formulas", || eigenvalue_formulas(opts.eigenvalue_perturbation)),
        check("no_photon_formula", || no_photon_formula(s)),
        check("step_convergence", || step_convergence(s)),
    ]
}
