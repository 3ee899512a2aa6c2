//! Maxwellians, collision invariants and kernel bases.

mod common;

use std::f64::consts::PI;

use linboltz::gas_models::{
    general_maxwellian_poly, invariants_mix, invariants_poly, linearized_kernel_basis_mix,
    linearized_kernel_basis_poly, maxwellian_mix, maxwellian_poly, MixtureSpec, PolyatomicGas,
};
use linboltz::quadrature::build_grid;
use linboltz::{Error, Vec3};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

#[test]
fn maxwellian_values_at_reference_points() {
    let gas = common::two_level();
    let m0 = maxwellian_poly(&gas, 0, &Vec3::zeros()).unwrap();
    assert!((m0 - 0.063_493_636).abs() < 1e-9);
    assert!((m0 - (2.0 * PI).powf(-1.5)).abs() < 1e-17);
    let m1 = maxwellian_poly(&gas, 1, &Vec3::zeros()).unwrap();
    assert!((m1 - (-1.0f64).exp() * (2.0 * PI).powf(-1.5)).abs() < 1e-17);

    // m = 2 at |ξ| = 1: (2/2π)^{3/2} e^{−1} = π^{−3/2} e^{−1}.
    let heavy = PolyatomicGas::new(2.0, vec![0.0], vec![1.0]).unwrap();
    let v = maxwellian_poly(&heavy, 0, &Vec3::new(0.6, 0.0, 0.8)).unwrap();
    let exact = 0.066_066_410_128_993_84_f64; // π^{−3/2} e^{−1}, 30-digit evaluation
    assert!(common::rel(v, exact) < 1e-14, "{v}");
}

#[test]
fn mixture_maxwellian_is_linear_in_density() {
    let one = MixtureSpec::new(vec![1.0], vec![1.0]).unwrap();
    let two = MixtureSpec::new(vec![1.0], vec![2.0]).unwrap();
    assert!((maxwellian_mix(&one, 0, &Vec3::zeros()).unwrap() - (2.0 * PI).powf(-1.5)).abs() < 1e-17);
    let xi = Vec3::new(0.3, -1.1, 0.4);
    let a = maxwellian_mix(&one, 0, &xi).unwrap();
    let b = maxwellian_mix(&two, 0, &xi).unwrap();
    assert_eq!(b, 2.0 * a);
}

#[test]
fn grid_quadrature_recovers_densities() {
    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 0.5]).unwrap();
    let grid = build_grid(16, 6.0).unwrap();
    for alpha in 0..2 {
        let total = grid.integrate(|x| maxwellian_mix(&mix, alpha, x).unwrap());
        assert!((total - mix.densities()[alpha]).abs() < 1e-6, "species {alpha}: {total}");
    }
    let gas = common::monatomic();
    let total = grid.integrate(|x| maxwellian_poly(&gas, 0, x).unwrap());
    assert!((total - 1.0).abs() < 2e-3);
}

#[test]
fn grid_quadrature_error_decreases_under_refinement() {
    let gas = common::monatomic();
    let errors: Vec<f64> = [4, 8, 16]
        .iter()
        .map(|&n| {
            let grid = build_grid(n, 6.0).unwrap();
            (grid.integrate(|x| maxwellian_poly(&gas, 0, x).unwrap()) - 1.0).abs()
        })
        .collect();
    assert!(errors[1] < errors[0] && errors[2] < errors[1], "{errors:?}");
}

#[test]
fn out_of_range_components_are_rejected() {
    let gas = common::two_level();
    assert!(matches!(maxwellian_poly(&gas, 2, &Vec3::zeros()), Err(Error::IndexOutOfRange { index: 2, count: 2 })));
    assert!(matches!(maxwellian_mix(&common::binary(), 5, &Vec3::zeros()), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn invariant_values() {
    let gas = common::two_level();
    let basis = invariants_poly(&gas);
    assert_eq!(basis.count(), 5);
    let energy = &basis.fields()[4];
    assert_eq!(energy.eval(0, &Vec3::zeros()), 0.0);
    assert_eq!(energy.eval(1, &Vec3::zeros()), 2.0);

    let mono = invariants_poly(&common::monatomic());
    let xi = Vec3::new(1.0, 2.0, -0.5);
    assert_eq!(mono.fields()[4].eval(0, &xi), xi.norm_squared());
    assert_eq!(mono.fields()[2].eval(0, &xi), 2.0);

    let mix = common::binary();
    let basis = invariants_mix(&mix);
    assert_eq!(basis.count(), 6);
    let x = Vec3::new(1.0, 0.0, 0.0);
    assert_eq!(basis.fields()[2].eval(0, &x), 1.0);
    assert_eq!(basis.fields()[2].eval(1, &x), 2.0);
    assert_eq!(invariants_mix(&MixtureSpec::new(vec![1.0], vec![1.0]).unwrap()).count(), 5);
}

/// Rows are `(component, node)` samples, columns the basis fields.
fn sample_matrix(basis: &linboltz::gas_models::CollisionInvariantBasis, components: usize, nodes: &[Vec3]) -> DMatrix<f64> {
    let rows = components * nodes.len();
    DMatrix::from_fn(rows, basis.count(), |r, c| basis.fields()[c].eval(r / nodes.len(), &nodes[r % nodes.len()]))
}

/// Numerical rank by modified Gram–Schmidt on the columns.
fn gram_schmidt_rank(m: &DMatrix<f64>) -> usize {
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for c in 0..m.ncols() {
        let mut v = m.column(c).into_owned();
        let scale = v.norm();
        for q in &kept {
            let p = q.dot(&v);
            v -= p * q;
        }
        if v.norm() > 1e-10 * scale {
            kept.push(v.normalize());
        }
    }
    kept.len()
}

#[test]
fn bases_have_full_rank_on_small_grids() {
    let nodes: Vec<Vec3> = {
        const C: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
        C.iter().flat_map(|&x| C.iter().flat_map(move |&y| C.iter().map(move |&z| Vec3::new(x, y, z)))).collect()
    };
    let gas = common::two_level();
    let m = sample_matrix(&invariants_poly(&gas), 2, &nodes);
    assert_eq!(m.rank(1e-10), 5);
    assert_eq!(gram_schmidt_rank(&sample_matrix(&linearized_kernel_basis_poly(&gas), 2, &nodes)), 5);

    let mix = common::binary();
    assert_eq!(sample_matrix(&invariants_mix(&mix), 2, &nodes).rank(1e-10), 6);
    assert_eq!(gram_schmidt_rank(&sample_matrix(&linearized_kernel_basis_mix(&mix), 2, &nodes)), 6);
}

#[test]
fn kernel_basis_is_weighted_by_root_maxwellian() {
    let gas = common::two_level();
    let basis = linearized_kernel_basis_poly(&gas);
    let xi = Vec3::new(0.2, 0.1, -0.7);
    for i in 0..2 {
        let expected = maxwellian_poly(&gas, i, &xi).unwrap().sqrt();
        assert!(common::rel(basis.fields()[0].eval(i, &xi), expected) < 1e-15);
    }
}

fn gas_strategy() -> impl Strategy<Value = PolyatomicGas> {
    (0.2f64..5.0, prop::collection::vec((0.0f64..3.0, 0.2f64..4.0), 1..5))
        .prop_map(|(m, lv)| PolyatomicGas::new(m, lv.iter().map(|p| p.0).collect(), lv.iter().map(|p| p.1).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_defect_antisymmetry(gas in gas_strategy(), idx in prop::array::uniform4(0usize..4)) {
        let r = gas.r();
        let [i, j, k, l] = idx.map(|x| x % r);
        let d = gas.energy_defect(i, j, k, l);
        prop_assert!((d + gas.energy_defect(k, l, i, j)).abs() < 1e-14);
        prop_assert!((d - gas.energy_defect(j, i, l, k)).abs() < 1e-14);
    }

    #[test]
    fn log_maxwellian_is_a_collision_invariant(
        gas in gas_strategy(),
        n in 0.2f64..3.0,
        u in prop::array::uniform3(-1.0f64..1.0),
        t in 0.5f64..2.0,
    ) {
        // log(M_i/φ_i) = a + b·ξ + c(m|ξ|² + 2I_i): fit (a, b, c) by least
        // squares over sampled points and check the residual.
        let f = general_maxwellian_poly(&gas, n, Vec3::from(u), t);
        let pts: Vec<Vec3> = (0..12).map(|k| {
            let s = k as f64;
            Vec3::new((0.7 * s).sin() * 2.0, (1.3 * s).cos() * 1.5, 0.25 * s - 1.0)
        }).collect();
        let r = gas.r();
        let rows = r * pts.len();
        let a = DMatrix::from_fn(rows, 5, |row, c| {
            let (i, x) = (row / pts.len(), pts[row % pts.len()]);
            match c {
                0 => 1.0,
                1..=3 => x[c - 1],
                _ => gas.mass() * x.norm_squared() + 2.0 * gas.levels()[i],
            }
        });
        let b = DVector::from_fn(rows, |row, _| {
            let (i, x) = (row / pts.len(), pts[row % pts.len()]);
            (f.eval(i, &x) / gas.weights()[i]).ln()
        });
        let coef = a.clone().svd(true, true).solve(&b, 1e-14).unwrap();
        let residual = (&a * &coef - &b).norm() / b.norm().max(1.0);
        prop_assert!(residual < 1e-10, "residual {}", residual);
        prop_assert!((coef[4] + 0.5 / t).abs() < 1e-9);
        prop_assert!(f.eval(0, &Vec3::new(3.0, 3.0, 3.0)) > 0.0);
    }

    #[test]
    fn maxwellians_are_positive_and_even(gas in gas_strategy(), x in prop::array::uniform3(-6.0f64..6.0)) {
        let xi = Vec3::from(x);
        for i in 0..gas.r() {
            let v = maxwellian_poly(&gas, i, &xi).unwrap();
            prop_assert!(v > 0.0);
            prop_assert_eq!(v, maxwellian_poly(&gas, i, &(-xi)).unwrap());
        }
    }
}
