//! Parallel sweep of the peak speed for a few cavity decay rates.

use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::{sweep, ScenarioSpec, SweepParameter, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let values = vec![0.5, 1.0, 2.0, 4.0, 6.0];
    for kappa in [0.0, 0.05, 0.1] {
        let template = ScenarioSpec::two_atom_direct(values[0], kappa, IntegratorSettings::default())?;
        let rows = sweep(&SweepSpec { template, parameter: SweepParameter::VMax, values: values.clone() })?;
        println!("kappa = {kappa}");
        for row in rows {
            match row.outcome {
                Ok(s) => println!("  v_max = {:>4}: F = {:.6}, P0 = {:.6}", row.value, s.fidelity, s.p0),
                Err(e) => println!("  v_max = {:>4}: failed: {e}", row.value),
            }
        }
    }
    Ok(())
}
