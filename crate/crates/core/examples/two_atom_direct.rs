//! Two two-level atoms crossing the cavity with shaped motion.
//!
//! `cargo run --release --example two_atom_direct -- [v_max]`

use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::run_two_atom_direct;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v_max: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    println!("v_max = {v_max}");
    println!("{:>6} {:>10} {:>10} {:>10}", "kappa", "F", "P0", "T");
    for kappa in [0.0, 0.05, 0.1, 0.2] {
        let r = run_two_atom_direct(v_max, kappa, IntegratorSettings::default())?;
        println!("{kappa:>6} {:>10.6} {:>10.6} {:>10.1}", r.fidelity, r.p0, r.duration);
    }
    Ok(())
}
