//! Collision frequency ν(|ξ|) and its linear envelopes for both gas models
//! and both cross-section families.
//!
//! Run with `cargo run --release --example collision_frequency`.

use linboltz::cross_sections::CrossSectionModel;
use linboltz::gas_models::{MixtureSpec, PolyatomicGas};
use linboltz::operator::NuRule;
use linboltz::verify::{nu_profile_mix, nu_profile_poly, speed_samples, NuProfile};

fn describe(label: &str, p: &NuProfile) {
    let (lo, hi) = p.envelope();
    println!(
        "{label:<28} ν(0) = {:>8.4}, ν(10) = {:>8.4}, c− = {lo:.4}, c+/c− = {:.3}, tail variation {:.2}%, monotone: {}",
        p.nu[0],
        p.nu[p.nu.len() - 1],
        hi / lo,
        100.0 * p.linear_tail_variation(8.0, 10.0),
        p.is_monotone()
    );
}

fn main() -> linboltz::Result<()> {
    let speeds = speed_samples(10.0, 50);
    let rule = NuRule::default();

    let gas = PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?;
    for model in [CrossSectionModel::PolyHardSphere { c: 1.0 }, CrossSectionModel::PolyBounded { c: 1.0, gamma: 0.5 }] {
        let sigma = model.poly()?;
        for i in 0..gas.r() {
            describe(&format!("{} level {i}", model.variant_name()), &nu_profile_poly(&gas, &sigma, i, &speeds, &rule)?);
        }
    }

    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0])?;
    for model in [CrossSectionModel::default_mix(2), CrossSectionModel::MixBounded { c: 1.0, gamma: 0.5 }] {
        let sigma = model.mix(2)?;
        for a in 0..mix.s() {
            describe(&format!("{} species {a}", model.variant_name()), &nu_profile_mix(&mix, &sigma, a, &speeds, &rule)?);
        }
    }
    Ok(())
}
