//! Assembles the symmetrized linearized operator on a small grid and
//! inspects its spectrum and null space.
//!
//! Run with `cargo run --release --example operator_spectrum`.

use linboltz::cross_sections::CrossSectionModel;
use linboltz::gas_models::{linearized_kernel_basis_mix, linearized_kernel_basis_poly, MixtureSpec, PolyatomicGas};
use linboltz::kernels::KernelRules;
use linboltz::operator::{assemble_mix, assemble_poly};
use linboltz::quadrature::build_grid;
use linboltz::verify::test_nullspace;

fn main() -> linboltz::Result<()> {
    let grid = build_grid(6, 5.0)?;
    let rules = KernelRules::default();

    let gas = PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?;
    let op = assemble_poly(&gas, &CrossSectionModel::default_poly(), &grid, &rules)?;
    let eig = op.eigenvalues()?;
    println!("two-level gas, {} rows", op.rows());
    println!("  smallest eigenvalues: {:.4?}", &eig[..8]);
    println!("  largest eigenvalue:   {:.4}", eig[eig.len() - 1]);
    let (lo, hi) = op.nu_envelope();
    println!("  ν on the grid:        [{lo:.4}, {hi:.4}]");
    let report = test_nullspace(&op, &linearized_kernel_basis_poly(&gas), 1)?;
    println!(
        "  collision invariants: residuals {:.3?}, τ = {:.3}, {} eigenvalues below τ, gap ratio {:.3}",
        report.residuals, report.tau_null, report.below_threshold, report.gap_ratio
    );

    let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0])?;
    let op = assemble_mix(&mix, &CrossSectionModel::default_mix(2), &grid, &rules)?;
    let eig = op.eigenvalues()?;
    println!("binary mixture, {} rows", op.rows());
    println!("  smallest eigenvalues: {:.4?}", &eig[..8]);
    let report = test_nullspace(&op, &linearized_kernel_basis_mix(&mix), 1)?;
    println!("  λ_min / λ_max = {:.3e}, random residual {:.3}", report.lambda_min / report.lambda_max, report.random_residual);
    Ok(())
}
