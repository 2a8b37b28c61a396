//! Λ atoms driven by a laser: the full three-level model against the
//! effective two-level model obtained by eliminating level 3.

use std::time::Instant;

use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::ScenarioSpec;
use dapsim::model::{effective_params, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (v, delta, kappa, gamma) = (0.005, 10.0, 0.1, 0.1);
    let p = effective_params(&[1.0], &[1.0], delta, gamma, kappa)?;
    println!(
        "peak effective rates: g~ = {:.4}, kappa~ = {:.4}, gamma~ = {:.2e}",
        p.g_tilde[0], p.kappa_tilde, p.gamma_tilde[0]
    );
    let spec = ScenarioSpec::two_atom_lambda(v, delta, kappa, gamma, IntegratorSettings::default())?;
    for w in spec.warnings() {
        println!("warning: {w}");
    }
    for (name, scheme) in [("effective", Scheme::EffectiveTwoLevel), ("lambda", Scheme::Lambda)] {
        let start = Instant::now();
        let r = dapsim::experiments::run(&spec.clone().with_scheme(scheme))?;
        println!(
            "{name:>9}: F = {:.6}, P0 = {:.6}, T = {:.0}, laser off at {:?} ({:.1?})",
            r.fidelity,
            r.p0,
            r.duration,
            r.laser_off.map(|t| t.round()),
            start.elapsed()
        );
    }
    Ok(())
}
