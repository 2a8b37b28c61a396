//! Frozen-coupling evolution of the single-excitation block approaches the
//! projector onto the dark state as time grows.

use dapsim::analysis::{bright_eigensystem, zeno_projector_distance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (g1, g2) = (0.6, 0.8);
    for kappa in [0.5, 2.0, 8.0] {
        let e = bright_eigensystem(g1, g2, kappa)?;
        println!("kappa = {kappa}: lambda2 = {:.4}, lambda3 = {:.4}", e.lambda2, e.lambda3);
        for dt in [1.0, 10.0, 50.0, 200.0] {
            println!("  dt = {dt:>5}: ||U - P|| = {:.3e}", zeno_projector_distance(g1, g2, kappa, dt)?);
        }
    }
    Ok(())
}
