//! Quadrature building blocks: Gauss rules, sphere and plane rules, and the
//! Cartesian velocity grid, each applied to an integral with a known value.
//!
//! Run with `cargo run --example quadrature_rules`.

use std::f64::consts::PI;

use linboltz::quadrature::{build_grid, plane_rule, sphere_rule, GaussRule};

fn main() -> linboltz::Result<()> {
    // ∫_0^π sin x dx = 2
    let gl = GaussRule::legendre(10)?.on_interval(0.0, PI);
    println!("Gauss–Legendre(10)  ∫ sin       = {:.15} (exact 2)", gl.integrate(f64::sin));

    // ∫ x⁴ e^{−x²} dx = 3√π/4
    let gh = GaussRule::hermite(8)?;
    println!("Gauss–Hermite(8)    ∫ x⁴e^(−x²) = {:.15} (exact {:.15})", gh.integrate(|x| x.powi(4)), 0.75 * PI.sqrt());

    // ∫_{S²} z² dω = 4π/3
    let sphere = sphere_rule(12)?;
    println!("sphere({:>3} nodes)   ∫ z²        = {:.15} (exact {:.15})", sphere.len(), sphere.integrate(|w| w.z * w.z), 4.0 * PI / 3.0);

    // A pole-graded copy resolves ∫ e^{a(z−1)} dω = 2π(1 − e^{−2a})/a.
    let a = 60.0_f64;
    let exact = 2.0 * PI * (1.0 - (-2.0 * a).exp()) / a;
    let peaked = |w: &linboltz::Vec3| (a * (w.z - 1.0)).exp();
    println!(
        "peaked integrand    plain error {:.2e}, graded error {:.2e}",
        (sphere.integrate(peaked) - exact).abs(),
        (sphere.graded_towards_pole(a).integrate(peaked) - exact).abs()
    );

    // ∫_{R²} |w|^{−3/2} e^{−|w|²} dw = 2π·Γ(1/4)/2, with the singular weight
    // absorbed by the graded radial nodes.
    let plane = plane_rule(32, 16, 8.0, 0.5)?;
    let value = plane.integrate(|x, y| {
        let r2 = x * x + y * y;
        r2.powf(-0.75) * (-r2).exp()
    });
    println!("plane({:>4} nodes)   ∫ |w|^(−3/2)e^(−|w|²) = {value:.10} (exact {:.10})", plane.len(), PI * 3.625_609_908_221_908);

    // ∫_{[−R,R]³} e^{−|ξ|²/2} dξ ≈ (2π)^{3/2}; at R = 8 the box truncation
    // is below 1e-13.
    for n in [8, 16, 32] {
        let grid = build_grid(n, 8.0)?;
        let v = grid.integrate(|xi| (-0.5 * xi.norm_squared()).exp());
        println!("grid N = {n:>2}          ∫ Gaussian  = {v:.12} (exact {:.12})", (2.0 * PI).powf(1.5));
    }
    Ok(())
}
