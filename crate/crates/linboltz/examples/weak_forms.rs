//! Weak forms of the nonlinear and bilinear collision operators:
//! conservation of mass, momentum and energy, entropy dissipation, and
//! orthogonality of the bilinear term to the collision invariants.
//!
//! Run with `cargo run --release --example weak_forms`.

use linboltz::cross_sections::CrossSectionModel;
use linboltz::gas_models::{maxwellian_field_poly, PolyatomicGas};
use linboltz::operator::{conservation_weak_forms, entropy_production_poly, gamma_weak_forms, WeakFormRules};
use linboltz::verify::{gamma_test_field, perturbed_maxwellian, random_positive_field, stream_rng};

fn main() -> linboltz::Result<()> {
    let gas = PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?;
    let model = CrossSectionModel::default_poly();
    let rules = WeakFormRules::default();

    let names = ["mass", "momentum x", "momentum y", "momentum z", "energy"];
    for (name, form) in names.iter().zip(conservation_weak_forms(&gas, &model, &perturbed_maxwellian(&gas), &rules)?) {
        println!("(Q(f,f), {name:<10}) = {:>10.3e}  relative to loss scale {:.3e}", form.value(), form.relative());
    }

    let mut rng = stream_rng(3, 0);
    for k in 0..3 {
        let f = random_positive_field(&gas, &mut rng);
        println!("entropy production, random field {k}: W = {:.6e}", entropy_production_poly(&gas, &model, &f, &rules)?.value());
    }
    let at_eq = entropy_production_poly(&gas, &model, &maxwellian_field_poly(&gas), &rules)?;
    println!("entropy production at equilibrium: W = {:.3e}", at_eq.value());

    for (name, form) in names.iter().zip(gamma_weak_forms(&gas, &model, &gamma_test_field(&gas), &rules)?) {
        println!("(Γ(h,h), {name:<10}) relative {:.3e}", form.relative());
    }
    Ok(())
}
