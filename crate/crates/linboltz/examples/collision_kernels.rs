//! Reduced collision kernels of a two-level polyatomic gas and of a binary
//! mixture, with their symmetry under exchange of velocities and indices.
//!
//! Run with `cargo run --release --example collision_kernels`.

use linboltz::cross_sections::CrossSectionModel;
use linboltz::gas_models::{MixtureSpec, PolyatomicGas};
use linboltz::kernels::{KernelRules, MixKernels, PolyKernels};
use linboltz::verify::{kernel_symmetry_mix, kernel_symmetry_poly, stream_rng};
use linboltz::Vec3;

fn main() -> linboltz::Result<()> {
    let rules = KernelRules::default();
    let xi = Vec3::new(0.7, -0.2, 0.4);
    let xi_star = Vec3::new(-0.3, 0.5, 1.1);

    let gas = PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?;
    let poly = PolyKernels::new(&gas, CrossSectionModel::default_poly().poly()?, &rules);
    println!("polyatomic kernels at ξ = {xi:?}, ξ* = {xi_star:?}");
    for i in 0..gas.r() {
        for j in 0..gas.r() {
            println!(
                "  (i, j) = ({i}, {j}): k1 = {:.8}, k2 = {:.8}, k = k2 − k1 = {:.8}, k_ji(ξ*, ξ) = {:.8}",
                poly.k1(i, j, &xi, &xi_star)?,
                poly.k2(i, j, &xi, &xi_star)?,
                poly.k(i, j, &xi, &xi_star)?,
                poly.k(j, i, &xi_star, &xi)?
            );
        }
    }

    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0])?;
    let mixk = MixKernels::new(&mix, CrossSectionModel::default_mix(2).mix(2)?, &rules);
    println!("mixture kernels");
    for a in 0..2 {
        for b in 0..2 {
            println!(
                "  (α, β) = ({a}, {b}): loss = {:.8}, same = {:.8}, cross = {:.8}",
                mixk.loss(a, b, &xi, &xi_star)?,
                mixk.same(a, b, &xi, &xi_star)?,
                mixk.cross(a, b, &xi, &xi_star)?
            );
        }
    }

    let mut rng = stream_rng(1, 0);
    for check in kernel_symmetry_poly(&poly, 50, &mut rng)?.iter().chain(&kernel_symmetry_mix(&mixk, 50, &mut rng)?) {
        println!("{:>14}: max relative asymmetry over {} pairs = {:.2e}", check.kernel, check.pairs, check.max_relative_asymmetry);
    }
    Ok(())
}
