//! Closed-form rates for the Earth-Moon scenario, then a Monte Carlo check
//! of the white-noise diffusion and dephasing laws.
//!
//! Run with: cargo run --release -p gravidec --example mc_probe

use gravidec::rates::{DecoherenceReport, ScenarioInputs};
use gravidec::sim::{default_grid, run_ensemble, SimConfig};
use gravidec::{Catalog, PhysicalConstants};

fn main() {
    let constants = PhysicalConstants::si();
    let catalog = Catalog::builtin();
    let inputs = ScenarioInputs::from_preset(catalog.get("moon").unwrap(), &constants).unwrap();

    let report = DecoherenceReport::from_inputs(&inputs, &constants).unwrap();
    println!("Earth-Moon closed forms:");
    println!("  Gamma_gr  = {:.3e} 1/s", report.grav.gamma_gr);
    println!("  Gamma_em  = {:.3e} 1/s", report.em.gamma_em);
    println!("  Lambda_gr = {:.3e} 1/(s m^2)", report.grav.lambda_gr);
    println!("  ratio     = {:.3e}", report.ratio_direct);
    if let Some(t) = report.times.iter().find(|t| t.label == "planck_length") {
        println!("  t_dec at Planck-length separation = {:.3e} s", t.t_dec);
    }

    let config = SimConfig::from_scenario(&inputs, &constants, default_grid(), 1000, 0).unwrap();
    let stats = run_ensemble(&config).unwrap();
    println!("Monte Carlo (N = 1000, seed 0):");
    println!(
        "  D_fit/D_analytic = {:.4} +- {:.4}",
        stats.diffusion_ratio().unwrap(),
        stats.d_fit_se / stats.d_analytic
    );
    println!(
        "  max |dephasing| deviation where the prediction is in [0.1, 0.9]: {:.3}",
        stats.max_dephasing_deviation().unwrap()
    );
    println!(
        "  Gaussian identity within 3 sigma at every checkpoint: {}",
        stats.gauss_identity_within(3.0)
    );
}
