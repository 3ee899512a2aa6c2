//! Collision frequencies, discrete assembly and the direct collision-integral
//! oracles for `Q`, `L` and `Γ`.

mod common;

use std::f64::consts::PI;

use linboltz::cross_sections::{CrossSectionModel, PolyCrossSection};
use linboltz::gas_models::{
    linearized_kernel_basis_poly, maxwellian_field_poly, maxwellian_poly, DistributionField, MixtureSpec, PolyatomicGas,
};
use linboltz::kernels::{KernelRules, MixKernels, PolyKernels};
use linboltz::operator::{
    apply_l_direct, apply_q_poly, assemble_mix, assemble_poly, assemble_poly_with, conservation_weak_forms,
    entropy_production_poly, gamma_poly, gamma_weak_forms, nu_mix, nu_poly, AssemblyOptions, DirectRules,
    WeakFormRules,
};
use linboltz::quadrature::{build_grid, sphere_rule, GaussRule};
use linboltz::verify::{gaussian_bump, operator_consistency, random_positive_field, stream_rng};
use linboltz::{Error, Vec3};
use proptest::prelude::*;

/// Mean relative speed of a unit-temperature Maxwellian seen from speed `x`,
/// times `4π`: the hard-sphere monatomic collision frequency with `C = 1`.
fn nu_hard_sphere_closed_form(x: f64) -> f64 {
    let tail = if x == 0.0 { (2.0 / PI).sqrt() } else { (x + 1.0 / x) * libm::erf(x / 2f64.sqrt()) };
    4.0 * PI * ((2.0 / PI).sqrt() * (-0.5 * x * x).exp() + tail)
}

#[test]
fn monatomic_collision_frequency_closed_form() {
    let gas = common::monatomic();
    let hs = common::hard_sphere();
    // ν(0) = 4π (2π)^{−3/2} · 4π ∫_0^∞ r³ e^{−r²/2} dr with the radial
    // moment evaluated by composite Simpson.
    let n = 40_000;
    let h = 12.0 / n as f64;
    let f = |r: f64| r.powi(3) * (-0.5 * r * r).exp();
    let moment = (1..n).map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h)).sum::<f64>() * h / 3.0;
    assert!((moment - 2.0).abs() < 1e-10);
    let nu0 = nu_poly(&gas, &hs, 0, 0.0).unwrap();
    assert!(common::rel(nu0, 4.0 * PI * (2.0 * PI).powf(-1.5) * 4.0 * PI * moment) < 1e-10);
    assert!((nu0 - 20.053_026).abs() < 1e-5, "{nu0}");
    for x in [0.0, 0.1, 0.5, 1.0, 2.0, 3.7, 6.0, 9.5] {
        let nu = nu_poly(&gas, &hs, 0, x).unwrap();
        assert!(common::rel(nu, nu_hard_sphere_closed_form(x)) < 1e-9, "x = {x}: {nu}");
    }
}

/// `Σ_jkl ∫ M_j(ξ*) |g| 4π σ_ij^kl(|g|) dξ*` in spherical coordinates around
/// `ξ` (`ξ* = ξ − ρω`), channel by channel, with `ρ = √(s0² + t²)` past each
/// threshold `s0` so the square-root onset is integrated smoothly.
fn nu_reference<S: PolyCrossSection>(gas: &PolyatomicGas, sigma: &S, i: usize, xi: &Vec3) -> f64 {
    let m = gas.mass();
    let sphere = sphere_rule(80).unwrap();
    let rho_max = xi.norm() + 10.0;
    let mut total = 0.0;
    for j in 0..gas.r() {
        for k in 0..gas.r() {
            for l in 0..gas.r() {
                let delta = gas.energy_defect(i, j, k, l);
                let s0 = if delta > 0.0 { 2.0 * (delta / m).sqrt() } else { 0.0 };
                let t_max = (rho_max * rho_max - s0 * s0).sqrt();
                let breaks: Vec<f64> = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.5, 8.0, 10.0, 12.0, 14.0]
                    .into_iter()
                    .filter(|b| *b < t_max)
                    .chain(std::iter::once(t_max))
                    .collect();
                let radial = GaussRule::legendre(20).unwrap().composite(&breaks);
                for (&t, &wt) in radial.nodes.iter().zip(&radial.weights) {
                    let rho = (s0 * s0 + t * t).sqrt();
                    let s = sigma.sigma(gas, i, j, k, l, rho);
                    if s == 0.0 {
                        continue;
                    }
                    let shell: f64 = sphere
                        .nodes
                        .iter()
                        .zip(&sphere.weights)
                        .map(|(p, &w)| w * maxwellian_poly(gas, j, &(xi - rho * p)).unwrap())
                        .sum();
                    total += wt * t / rho * rho * rho * rho * 4.0 * PI * s * shell;
                }
            }
        }
    }
    total
}

#[test]
fn polyatomic_collision_frequency_matches_cartesian_quadrature() {
    let gas = PolyatomicGas::new(1.0, vec![0.0, 0.5], vec![1.0, 2.0]).unwrap();
    for model in [common::hard_sphere(), CrossSectionModel::PolyBounded { c: 1.0, gamma: 0.5 }] {
        let sigma = model.poly().unwrap();
        for i in 0..2 {
            for x in [0.0, 0.8, 2.5, 6.0] {
                let xi = Vec3::new(0.0, 0.6 * x, 0.8 * x);
                let reference = nu_reference(&gas, &sigma, i, &xi);
                let nu = nu_poly(&gas, &model, i, x).unwrap();
                assert!(common::rel(nu, reference) < 1e-8, "{model:?} i = {i}, |ξ| = {x}: {nu} vs {reference}");
            }
        }
    }
}

#[test]
fn collision_frequency_envelope_and_growth() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    for i in 0..2 {
        let speeds: Vec<f64> = (0..50).map(|k| 10.0 * k as f64 / 49.0).collect();
        let nu: Vec<f64> = speeds.iter().map(|&x| nu_poly(&gas, &hs, i, x).unwrap()).collect();
        assert!(nu.windows(2).all(|w| w[1] >= w[0]), "level {i} not monotone");
        let ratios: Vec<f64> = speeds.iter().zip(&nu).map(|(x, v)| v / (1.0 + x)).collect();
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(lo > 0.0 && hi / lo <= 10.0, "level {i}: [{lo}, {hi}]");
        let tail: Vec<f64> = speeds.iter().zip(&nu).filter(|(x, _)| **x >= 8.0).map(|(x, v)| v / x).collect();
        let (tlo, thi) = (tail.iter().cloned().fold(f64::INFINITY, f64::min), tail.iter().cloned().fold(0.0, f64::max));
        assert!((thi - tlo) / tlo <= 0.05, "level {i}: ν/|ξ| in [{tlo}, {thi}]");
    }
    assert!(nu_poly(&gas, &hs, 2, 1.0).is_err());
}

#[test]
fn mixture_collision_frequency_values() {
    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 0.5]).unwrap();
    let c = [[1.0, 0.6], [0.6, 1.4]];
    let model = CrossSectionModel::MixHardSphere { c: c.iter().map(|r| r.to_vec()).collect() };
    for alpha in 0..2 {
        // ν_α(0) = Σ_β 32π² n_β C_αβ (m_β/2π)^{3/2} / m_β².
        let exact: f64 = (0..2)
            .map(|b| {
                let (mb, nb) = (mix.masses()[b], mix.densities()[b]);
                32.0 * PI * PI * nb * c[alpha][b] * (mb / (2.0 * PI)).powf(1.5) / (mb * mb)
            })
            .sum();
        assert!(common::rel(nu_mix(&mix, &model, alpha, 0.0).unwrap(), exact) < 1e-10);
    }
    // Single species of unit mass and density: 8π·(2π)^{−3/2}·4π.
    let single = MixtureSpec::new(vec![1.0], vec![1.0]).unwrap();
    let v = nu_mix(&single, &common::mix_hard_sphere(1), 0, 0.0).unwrap();
    assert!(common::rel(v, 32.0 * PI * PI * (2.0 * PI).powf(-1.5)) < 1e-10);

    // Linear in the densities.
    let doubled = MixtureSpec::new(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap();
    for x in [0.0, 1.3, 7.0] {
        let a = nu_mix(&mix, &model, 1, x).unwrap();
        let b = nu_mix(&doubled, &model, 1, x).unwrap();
        assert!(common::rel(b, 2.0 * a) < 1e-13);
    }

    // Envelope on [0, 10].
    let binary = common::binary();
    for alpha in 0..2 {
        let q: Vec<f64> = (0..50)
            .map(|k| {
                let x = 10.0 * k as f64 / 49.0;
                nu_mix(&binary, &common::mix_hard_sphere(2), alpha, x).unwrap() / (1.0 + x)
            })
            .collect();
        let lo = q.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = q.iter().cloned().fold(0.0, f64::max);
        assert!(lo > 0.0 && hi / lo <= 10.0);
    }
}

#[test]
fn assembled_matrix_structure() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    let rules = KernelRules::default();
    let grid = build_grid(4, 4.0).unwrap();
    let op = assemble_poly(&gas, &hs, &grid, &rules).unwrap();
    let n = grid.len();
    assert_eq!(op.rows(), 2 * n);
    assert_eq!(op.kmat, op.kmat.transpose());
    assert!(op.nu.iter().all(|v| *v > 0.0));
    let kern = PolyKernels::new(&gas, hs.poly().unwrap(), &rules);
    for p in 0..op.rows() {
        for q in 0..op.rows() {
            let (c, a, d, b) = (p / n, p % n, q / n, q % n);
            if a == b {
                assert_eq!(op.kmat[(p, q)], 0.0);
                continue;
            }
            let k = kern.k(c, d, &grid.nodes[a], &grid.nodes[b]).unwrap() * grid.weight;
            assert!((op.kmat[(p, q)] - k).abs() <= 1e-13 * k.abs(), "({p},{q})");
            // Reflecting both velocities leaves the entry unchanged.
            let (ma, mb) = (grid.mirror_index(a), grid.mirror_index(b));
            let mirrored = op.kmat[(c * n + ma, d * n + mb)];
            assert!((mirrored - op.kmat[(p, q)]).abs() <= 1e-10 * k.abs().max(1e-300));
        }
        assert_eq!(op.nu[p], nu_poly(&gas, &hs, p / n, grid.nodes[p % n].norm()).unwrap());
    }
    let l = op.l_matrix();
    assert_eq!(l, l.transpose());
    let h: Vec<f64> = (0..op.rows()).map(|p| (p as f64 * 0.37).sin()).collect();
    let lh = op.apply_l(&h);
    let lh2 = &l * nalgebra::DVector::from_column_slice(&h);
    assert!(lh.iter().zip(lh2.iter()).all(|(a, b)| (a - b).abs() < 1e-10));
}

#[test]
fn mixture_assembly_structure_and_spectrum() {
    let mix = common::binary();
    let model = common::mix_hard_sphere(2);
    let rules = KernelRules::default();
    let grid = build_grid(4, 4.0).unwrap();
    let op = assemble_mix(&mix, &model, &grid, &rules).unwrap();
    let n = grid.len();
    assert_eq!(op.rows(), 2 * n);
    assert_eq!(op.kmat, op.kmat.transpose());
    let kern = MixKernels::new(&mix, model.mix(2).unwrap(), &rules);
    for (p, q) in [(0, 5), (3, n + 7), (n + 1, n + 60), (n + 2, 9)] {
        let k = kern.k(p / n, q / n, &grid.nodes[p % n], &grid.nodes[q % n]).unwrap() * grid.weight;
        assert!((op.kmat[(p, q)] - k).abs() <= 1e-13 * k.abs());
    }
    for a in 0..n {
        assert_eq!(op.kmat[(a, a)], 0.0);
        assert_eq!(op.kmat[(a, n + a)], 0.0);
    }
    let ev = op.eigenvalues().unwrap();
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    assert!(ev[0] >= -1e-8 * ev[ev.len() - 1], "{}", ev[0]);
}

#[test]
fn assembly_guards() {
    let gas = common::two_level();
    let rules = KernelRules::default();
    let grid = build_grid(4, 4.0).unwrap();
    let opts = AssemblyOptions { size_cap: 100, ..AssemblyOptions::default() };
    let err = assemble_poly_with(&gas, common::hard_sphere().poly().unwrap(), &grid, &rules, &opts).unwrap_err();
    assert!(matches!(err, Error::SizeCap { rows: 128, cap: 100 }));
    assert!(matches!(assemble_poly(&gas, &common::mix_hard_sphere(2), &grid, &rules), Err(Error::FamilyMismatch { .. })));
}

#[test]
fn monatomic_spectrum_is_nonnegative() {
    let gas = common::monatomic();
    let op = assemble_poly(&gas, &common::hard_sphere(), &build_grid(6, 5.0).unwrap(), &KernelRules::default()).unwrap();
    let ev = op.eigenvalues().unwrap();
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    assert!(lo >= -1e-8 * hi, "λ_min = {lo}, λ_max = {hi}");
    let (c_lo, c_hi) = op.nu_envelope();
    assert!(c_lo > 0.0 && c_hi >= c_lo);
}

#[test]
fn maxwellian_is_an_equilibrium() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    let rules = DirectRules::default();
    let m = maxwellian_field_poly(&gas);
    for xi in [Vec3::zeros(), Vec3::new(0.5, -1.0, 0.3), Vec3::new(2.5, 0.0, 1.0)] {
        for i in 0..2 {
            let q = apply_q_poly(&gas, &hs, &m, &xi, i, &rules).unwrap();
            assert!(q.loss > 0.0);
            assert!(q.value().abs() <= 1e-6 * q.loss, "ξ = {xi:?}, i = {i}: {q:?}");
        }
    }
}

#[test]
fn direct_operator_annihilates_the_collision_invariants() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    let rules = DirectRules::default();
    let basis = linearized_kernel_basis_poly(&gas);
    for (idx, h) in basis.fields().iter().enumerate() {
        for xi in [Vec3::new(0.3, 0.2, -0.1), Vec3::new(-1.2, 0.4, 0.9)] {
            for i in 0..2 {
                let lh = apply_l_direct(&gas, &hs, h, &xi, i, &rules).unwrap();
                let scale = nu_poly(&gas, &hs, i, xi.norm()).unwrap() * h.eval(i, &xi).abs().max(1.0);
                assert!(lh.abs() <= 1e-6 * scale, "invariant {idx}, ξ = {xi:?}, i = {i}: {lh}");
            }
        }
    }
}

/// `(u, v) = Σ_i ∫ u_i v_i dξ` over `components` components by tensor
/// Gauss–Hermite quadrature, stretched by `1/√(3/4)` to match integrands that
/// decay like `e^{−3|ξ|²/4}` (a kernel image against a Gaussian bump).
fn inner<F: Fn(usize, &Vec3) -> f64>(order: usize, components: usize, f: F) -> f64 {
    let gh = GaussRule::hermite(order).unwrap();
    let stretch = (4.0f64 / 3.0).sqrt();
    let mut total = 0.0;
    for (&x, &wx) in gh.nodes.iter().zip(&gh.weights) {
        for (&y, &wy) in gh.nodes.iter().zip(&gh.weights) {
            for (&z, &wz) in gh.nodes.iter().zip(&gh.weights) {
                let q = Vec3::new(x, y, z);
                let p = stretch * q;
                let w = stretch.powi(3) * wx * wy * wz * q.norm_squared().exp();
                total += w * (0..components).map(|i| f(i, &p)).sum::<f64>();
            }
        }
    }
    total
}

#[test]
fn direct_operator_is_symmetric_and_nonnegative() {
    // The oracle's own quadrature limits agreement to a few 1e-4 here; the
    // tolerance leaves headroom without hiding an O(1%) asymmetry.
    let gas = common::monatomic();
    let hs = common::hard_sphere();
    let rules = DirectRules::new(12, 12, 8, 10.0).unwrap();
    let bump = |c: Vec3| DistributionField::new(1, move |_, x| (1.0 + 0.4 * x.y) * (-0.5 * (x - c).norm_squared()).exp());
    let h = bump(Vec3::new(0.2, 0.0, 0.1));
    let g = bump(Vec3::new(-0.1, 0.3, 0.0));
    let lhg = inner(6, 1, |i, x| apply_l_direct(&gas, &hs, &h, x, i, &rules).unwrap() * g.eval(i, x));
    let hlg = inner(6, 1, |i, x| h.eval(i, x) * apply_l_direct(&gas, &hs, &g, x, i, &rules).unwrap());
    assert!((lhg - hlg).abs() <= 2e-3 * lhg.abs(), "(Lh,g) = {lhg}, (h,Lg) = {hlg}");
    let lhh = inner(6, 1, |i, x| apply_l_direct(&gas, &hs, &h, x, i, &rules).unwrap() * h.eval(i, x));
    assert!(lhh > 0.0, "(Lh,h) = {lhh}");
}

#[test]
fn assembled_operator_converges_to_the_direct_one() {
    let gas = common::monatomic();
    let hs = common::hard_sphere();
    let rules = KernelRules::default();
    let h = gaussian_bump(1);
    let errors: Vec<f64> = [4, 8]
        .iter()
        .map(|&n| {
            let op = assemble_poly(&gas, &hs, &build_grid(n, 5.0).unwrap(), &rules).unwrap();
            operator_consistency(&op, &gas, &hs, &h, &DirectRules::default()).unwrap().relative_error
        })
        .collect();
    assert!(errors[1] < errors[0], "{errors:?}");
}

#[test]
fn quadratic_term_properties() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    let rules = DirectRules::new(12, 8, 8, 10.0).unwrap();
    let zero = DistributionField::new(2, |_, _| 0.0);
    let xi = Vec3::new(0.4, -0.3, 0.2);
    assert_eq!(gamma_poly(&gas, &hs, &zero, &xi, 0, &rules).unwrap(), 0.0);
    let h = DistributionField::new(2, |i, x| (1.0 + i as f64) * (x.x - 0.3 * x.z) * (-0.25 * x.norm_squared()).exp());
    let h2 = h.scaled(2.0);
    for i in 0..2 {
        let a = gamma_poly(&gas, &hs, &h, &xi, i, &rules).unwrap();
        let b = gamma_poly(&gas, &hs, &h2, &xi, i, &rules).unwrap();
        assert!((b - 4.0 * a).abs() <= 1e-12 * b.abs().max(1e-300), "{a} {b}");
    }
    for form in gamma_weak_forms(&gas, &hs, &h, &WeakFormRules::default()).unwrap() {
        assert!(form.relative() <= 1e-6, "{form:?}");
    }
}

#[test]
fn weak_forms_conserve_and_produce_entropy() {
    let gas = common::two_level();
    let hs = common::hard_sphere();
    let rules = WeakFormRules::default();
    let mut rng = stream_rng(12, 0);
    for _ in 0..3 {
        let f = random_positive_field(&gas, &mut rng);
        for form in conservation_weak_forms(&gas, &hs, &f, &rules).unwrap() {
            assert!(form.relative() <= 1e-6, "{form:?}");
        }
        let w = entropy_production_poly(&gas, &hs, &f, &rules).unwrap();
        assert!(w.value() <= 1e-12 * w.loss_scale, "W = {}", w.value());
    }
    let w = entropy_production_poly(&gas, &hs, &maxwellian_field_poly(&gas), &rules).unwrap();
    assert!(w.value().abs() <= 1e-10, "W[M] = {}", w.value());
    let negative = DistributionField::new(2, |_, x| x.x);
    assert!(entropy_production_poly(&gas, &hs, &negative, &rules).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn collision_frequency_is_positive_and_grows(
        m in 0.5f64..3.0,
        lv in prop::collection::vec((0.0f64..1.5, 0.5f64..2.0), 1..4),
        x in 0.0f64..9.0,
    ) {
        let gas = PolyatomicGas::new(m, lv.iter().map(|p| p.0).collect(), lv.iter().map(|p| p.1).collect()).unwrap();
        let hs = common::hard_sphere();
        for i in 0..gas.r() {
            let a = nu_poly(&gas, &hs, i, x).unwrap();
            let b = nu_poly(&gas, &hs, i, x + 1.0).unwrap();
            prop_assert!(a > 0.0 && b >= a);
        }
    }

    #[test]
    fn assembled_kernels_are_exactly_symmetric(half in 1usize..3, radius in 2.0f64..6.0, r in 1usize..3) {
        let levels: Vec<f64> = (0..r).map(|k| 0.7 * k as f64).collect();
        let gas = PolyatomicGas::new(1.0, levels, vec![1.0; r]).unwrap();
        let op = assemble_poly(&gas, &common::hard_sphere(), &build_grid(2 * half, radius).unwrap(), &KernelRules::default()).unwrap();
        prop_assert_eq!(op.kmat.clone(), op.kmat.transpose());
        prop_assert!(op.nu.iter().all(|v| *v > 0.0));
    }
}
