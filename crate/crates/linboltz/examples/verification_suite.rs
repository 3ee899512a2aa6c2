//! Runs a reduced verification suite on a two-level gas and prints the
//! report summary and its JSON form.
//!
//! Run with `cargo run --release --example verification_suite`.

use linboltz::gas_models::PolyatomicGas;
use linboltz::io::ModelFile;
use linboltz::verify::{run_suite, SuiteConfig, SuiteSelection};

fn main() -> linboltz::Result<()> {
    let model = ModelFile::polyatomic(PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0])?);
    let config = SuiteConfig {
        grid_n: 4,
        rho_samples: 100_000,
        selection: SuiteSelection {
            cross_section: true,
            symmetry: true,
            nu: true,
            nullspace: true,
            positivity: true,
            rho: true,
            hs_norm: true,
            ..SuiteSelection::none()
        },
        ..SuiteConfig::default()
    };
    let report = run_suite(&model, &config)?;
    print!("{}", report.summary());
    println!("failing checks: {:?}", report.failures());
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("report JSON: {} bytes, model hash {}", json.len(), report.model_hash);
    Ok(())
}
