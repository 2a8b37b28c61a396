//! Three Λ atoms: the third carries one excitation into the cavity and the
//! first two leave in a symmetric entangled state.
//!
//! Pass `--full` to run the three-level model (slow) instead of the
//! effective one.

use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::{run, ScenarioSpec};
use dapsim::model::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let full = std::env::args().any(|a| a == "--full");
    let scheme = if full { Scheme::Lambda } else { Scheme::EffectiveTwoLevel };
    let spec = ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, IntegratorSettings::default())?.with_scheme(scheme);
    let r = run(&spec)?;
    println!("{scheme:?}: F = {:.6}, P0 = {:.6}, T = {:.0}", r.fidelity, r.p0, r.duration);

    let ts = r.time_series()?;
    println!("{:>8} {:>7} {:>7} {:>7} {:>8} {:>8}", "t", "x1", "x2", "x3", "target", "initial");
    let step = (ts.t.len() / 15).max(1);
    for k in (0..ts.t.len()).step_by(step) {
        println!(
            "{:>8.0} {:>7.3} {:>7.3} {:>7.3} {:>8.5} {:>8.5}",
            ts.t[k], ts.positions[0][k], ts.positions[1][k], ts.positions[2][k], ts.pop_target[k], ts.pop_initial[k]
        );
    }
    Ok(())
}
