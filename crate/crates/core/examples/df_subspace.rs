//! Decoherence-free states of two and three atoms at fixed couplings.

use dapsim::analysis::{df_subspace, three_atom_df_decomposition};
use dapsim::dynamics::IntegratorSettings;
use dapsim::experiments::ScenarioSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = IntegratorSettings::default();

    let two = ScenarioSpec::two_atom_direct(1.0, 0.1, s)?;
    let df = df_subspace(&two.config, &[0.6, 0.8], &[])?;
    println!("two-level pair at g = (0.6, 0.8): dim {}, residual {:.1e}", df.dim(), df.emission_residual());
    for v in df.sector(1) {
        let terms: Vec<String> = v
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(i, a)| {
                let l = v.basis().label(i);
                format!("{:+.4} |{:?};{}>", a.re, l.levels, l.photons)
            })
            .collect();
        println!("  one excitation: {}", terms.join(" "));
    }

    let three = ScenarioSpec::three_atom(0.002, 20.0, 0.02, 0.05, s)?;
    let df = df_subspace(&three.config, &[0.5, 0.5, 0.9], &[1.0, 1.0, 1.0])?;
    let sectors: Vec<usize> = (0..=3).map(|k| df.sector_dim(k)).collect();
    println!("three Λ atoms: dim {} by excitation {sectors:?}, residual {:.1e}", df.dim(), df.emission_residual());

    for (g1, g3) in [(0.5, 0.9), (0.9, 0.3)] {
        let d = three_atom_df_decomposition(g1, g1, g3)?;
        println!(
            "g = ({g1}, {g1}, {g3}): |112> = {:.4} |112> {:+.4} |s1>, pairwise residual {:.1e}",
            d.coefficients.0,
            d.coefficients.1,
            d.residual().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
