//! Models and helpers shared by the integration tests.
#![allow(dead_code)]

use linboltz::cross_sections::CrossSectionModel;
use linboltz::gas_models::{MixtureSpec, PolyatomicGas};
use linboltz::quadrature::{sphere_rule, GaussRule};
use linboltz::Vec3;

/// Two-level gas `m = 1`, `I = (0, 1)`, `φ = (1, 1)`.
pub fn two_level() -> PolyatomicGas {
    PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0]).unwrap()
}

/// Single-level gas of unit mass.
pub fn monatomic() -> PolyatomicGas {
    PolyatomicGas::monatomic(1.0).unwrap()
}

/// Binary mixture `m = (1, 2)`, `n = (1, 1)`.
pub fn binary() -> MixtureSpec {
    MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap()
}

/// Hard spheres with `C = 1`.
pub fn hard_sphere() -> CrossSectionModel {
    CrossSectionModel::default_poly()
}

/// Mixture hard spheres with all `C_αβ = 1`.
pub fn mix_hard_sphere(s: usize) -> CrossSectionModel {
    CrossSectionModel::default_mix(s)
}

/// `∫_{R³} f(ξ*) dξ*` in spherical coordinates around `centre`
/// (`ξ* = centre + ρω`), which resolves integrable `1/|ξ − ξ*|`
/// singularities at the centre. Radial panels end at `rho_max`.
pub fn integrate_around<F: FnMut(&Vec3) -> f64>(centre: &Vec3, rho_max: f64, order: usize, f: F) -> f64 {
    integrate_around_with(centre, rho_max, order, &[], f)
}

/// As [`integrate_around`], with extra radial panel breaks (e.g. at channel
/// thresholds `|g| = 2√(ΔI/m)`, where the integrand has a square-root kink).
pub fn integrate_around_with<F: FnMut(&Vec3) -> f64>(centre: &Vec3, rho_max: f64, order: usize, extra: &[f64], mut f: F) -> f64 {
    let mut breaks: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.5, 8.0, 10.0, 12.0]
        .iter()
        .chain(extra)
        .copied()
        .filter(|b| *b < rho_max)
        .chain(std::iter::once(rho_max))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let radial = GaussRule::legendre(16).unwrap().composite(&breaks);
    let sphere = sphere_rule(order).unwrap();
    let mut total = 0.0;
    for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (p, &ws) in sphere.nodes.iter().zip(&sphere.weights) {
            total += wr * ws * rho * rho * f(&(centre + rho * p));
        }
    }
    total
}

/// Relative difference `|a − b| / |b|`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
