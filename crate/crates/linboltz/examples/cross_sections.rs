//! Cross-section models: channel thresholds, hard-sphere and bounded
//! families, and the microreversibility and symmetry relations.
//!
//! Run with `cargo run --example cross_sections`.

use linboltz::cross_sections::{
    channel_open, check_microreversibility, check_symmetry_relations, sample_open_channels, sigma_mix, sigma_poly,
    CrossSectionModel,
};
use linboltz::gas_models::{MixtureSpec, PolyatomicGas};
use linboltz::verify::stream_rng;

fn main() -> linboltz::Result<()> {
    let gas = PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?;
    let hard = CrossSectionModel::PolyHardSphere { c: 1.0 };
    let bounded = CrossSectionModel::PolyBounded { c: 1.0, gamma: 0.5 };

    // Exciting both molecules (0,0) → (1,1) needs m|g|² > 4ΔI = 8.
    let threshold = (4.0 * gas.energy_defect(0, 0, 1, 1) / gas.mass()).sqrt();
    println!("excitation threshold |g| = {threshold:.6}");
    println!("{:>6} {:>12} {:>12} {:>6}", "|g|", "hard sphere", "bounded", "open");
    for g in [0.5, 1.0, 2.0, threshold, 3.0, 5.0, 10.0] {
        let hs = sigma_poly(&hard, &gas, (0, 0, 1, 1), g, 0.0)?;
        let bd = sigma_poly(&bounded, &gas, (0, 0, 1, 1), g, 0.0)?;
        let open = channel_open(gas.mass(), gas.energy_defect(0, 0, 1, 1), g);
        println!("{g:>6.3} {hs:>12.6} {bd:>12.6} {open:>6}");
    }

    let mut rng = stream_rng(7, 0);
    let samples = sample_open_channels(&gas, 2000, 10.0, &mut rng);
    for model in [&hard, &bounded] {
        let sigma = model.poly()?;
        println!(
            "{}: microreversibility residual {:.2e}, symmetry-relation residual {:.2e}",
            model.variant_name(),
            check_microreversibility(&sigma, &gas, &samples)?,
            check_symmetry_relations(&sigma, &gas, &samples)?
        );
    }

    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0])?;
    let mix_bounded = CrossSectionModel::MixBounded { c: 1.0, gamma: 0.5 };
    for g in [0.1, 1.0, 10.0] {
        println!("mixture bounded σ_01(|g| = {g}) = {:.6}", sigma_mix(&mix_bounded, &mix, (0, 1), g, 0.0)?);
    }
    Ok(())
}
