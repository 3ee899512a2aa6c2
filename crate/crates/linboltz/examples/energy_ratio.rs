//! The energy-ratio bound for collisions between unequal masses: closed-form
//! ρ, a sampled search for violations, and the ratio along a collinear
//! family of collisions.
//!
//! Run with `cargo run --release --example energy_ratio`.

use linboltz::verify::{energy_ratio, rho_formula, rho_sample_check, RatioSample};
use linboltz::Vec3;

fn main() -> linboltz::Result<()> {
    for (ma, mb) in [(4.0, 1.0), (2.0, 1.0), (10.0, 3.0), (7.0, 2.0)] {
        let bound = rho_formula(ma, mb)?;
        let check = rho_sample_check(ma, mb, 200_000, 11)?;
        println!(
            "m = ({ma}, {mb}): ρ = {:.12}, sampled minimum {:.12}, violations {}, max energy residual {:.1e}",
            bound.rho, check.min_ratio, check.violations, check.max_energy_residual
        );
    }

    println!("collinear collisions for m = (4, 1):");
    for r in [-3.0, -1.0, -0.6, -0.2, 0.0, 0.5, 2.0] {
        let s = RatioSample { eta: Vec3::z(), q: 1.0, r, w: Vec3::zeros(), w_tilde: Vec3::zeros() };
        if let Some((ratio, _)) = energy_ratio(4.0, 1.0, &s) {
            println!("  r = {r:>5.2}: ratio {ratio:.6}");
        }
    }
    Ok(())
}
