//! Populations of the target, initial and one-photon states during a fast
//! transit, with and without cavity loss, sampled along the path of atom 1.

use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::run_two_atom_direct;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kappa in [0.0, 0.2] {
        let r = run_two_atom_direct(5.0, kappa, IntegratorSettings { stride: 2, ..Default::default() })?;
        let ts = r.time_series()?;
        println!("kappa = {kappa}, F = {:.4}, P0 = {:.4}", r.fidelity, r.p0);
        println!("{:>8} {:>7} {:>7} {:>8} {:>8} {:>8} {:>8}", "t", "x1", "x2", "norm", "target", "initial", "photon");
        // first snapshot past each marker position of atom 1
        let markers = [-1.0, 0.0, 0.5, 0.75, 0.9, 0.95, 0.98, 0.99, 0.995, 0.998];
        let mut rows: Vec<usize> = markers.iter().filter_map(|&m| ts.positions[0].iter().position(|&x| x >= m)).collect();
        rows.push(ts.t.len() - 1);
        rows.dedup();
        for k in rows {
            println!(
                "{:>8.2} {:>7.3} {:>7.3} {:>8.5} {:>8.5} {:>8.5} {:>8.5}",
                ts.t[k], ts.positions[0][k], ts.positions[1][k], ts.norm_sq[k], ts.pop_target[k], ts.pop_initial[k], ts.pop_cavity_photon[k]
            );
        }
        println!();
    }
    Ok(())
}
