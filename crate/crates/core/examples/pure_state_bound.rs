//! Deffner-Lutz bound for a pure initial state across the detuning axis:
//! the quarter-Rabi window τ_D = 1 starting from |1⟩, as a Δ-scan. The bound
//! peaks inside the PT-symmetric phase and flattens deep in the broken phase.

use qsl_lab::dynamics::{DensityMatrix, ModelParams};
use qsl_lab::qsl::qsl_pure;

fn main() {
    let psi0 = DensityMatrix::excited();
    println!("{:>6}  {:>12}  {:>12}  {:>12}", "Δ", "sin²B", "Λ^∞", "τ_QSL");
    let mut k = -30;
    while k <= 30 {
        let delta = 0.1 * k as f64;
        let p = ModelParams::from_delta(delta).unwrap();
        let r = qsl_pure(&psi0, &p, 1.0, 401).unwrap();
        println!(
            "{delta:>6.1}  {:>12.8}  {:>12.8}  {:>12.8}",
            r.distinguishability, r.lambda.operator, r.tau_qsl
        );
        k += 2;
    }
}
