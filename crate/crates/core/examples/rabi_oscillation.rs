//! Hermitian limit (Δ = 0): the excited population performs full Rabi
//! oscillations p(t) = cos²(ωt), and the speed limit over a quarter period
//! is saturated (τ_QSL = τ_D).

use qsl_lab::dynamics::{evolve_closed_form, DensityMatrix, ModelParams};
use qsl_lab::qsl::qsl_pure;

fn main() {
    let params = ModelParams::from_delta(0.0).unwrap();
    let psi0 = DensityMatrix::excited();

    println!("{:>6}  {:>12}  {:>12}", "t", "p(t)", "cos^2(t)");
    for k in 0..=10 {
        let t = 0.1 * std::f64::consts::PI * k as f64;
        let rho = evolve_closed_form(&psi0, &params, t).unwrap();
        println!(
            "{t:>6.3}  {:>12.9}  {:>12.9}",
            rho.excited_population(),
            t.cos().powi(2)
        );
    }

    let tau_d = std::f64::consts::FRAC_PI_2;
    let r = qsl_pure(&psi0, &params, tau_d, 201).unwrap();
    println!();
    println!("window [0, π/2]:");
    println!("  sin^2 B  = {:.12}", r.distinguishability);
    println!("  Λ^∞      = {:.12}", r.lambda.operator);
    println!("  τ_QSL/τ_D = {:.12}  (tight for unitary Rabi driving)", r.tau_qsl / r.tau_d);
}
