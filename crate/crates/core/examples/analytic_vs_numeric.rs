//! No-photon probability from adiabatic elimination against the full
//! numerical evolution, over a range of peak speeds.

use dapsim::analysis::analytic_no_photon_probability;
use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::{run, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kappa = 0.1;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "v_max", "numeric", "exp", "linear", "diff");
    for v_max in [0.5, 1.0, 2.0, 4.0] {
        let spec = ScenarioSpec::two_atom_direct(v_max, kappa, IntegratorSettings::default())?;
        let r = run(&spec)?;
        let c = &spec.config;
        let a = analytic_no_photon_probability(&c.trajectory, &c.coupling, kappa, r.duration)?;
        println!(
            "{v_max:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}",
            r.p0,
            a.exponential,
            a.linearized,
            (r.p0 - a.exponential).abs()
        );
    }
    Ok(())
}
