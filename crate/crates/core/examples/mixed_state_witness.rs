//! Zhang bound along a mixed-state trajectory at the exceptional point:
//! at isolated window starts τ the relative purity returns to 1, the bound
//! collapses (τ_QSL → 0) while the endpoints stay distinguishable in trace
//! distance — an apparent "infinite speed" window.

use qsl_lab::dynamics::{evolve_closed_form, DensityMatrix, ModelParams};
use qsl_lab::qsl::{qsl_mixed, trace_distance};

fn main() {
    let params = ModelParams::from_delta(1.0).unwrap();
    let rho0 = DensityMatrix::mixed(0.6).unwrap();
    let tau_d = 1.0;

    println!(
        "{:>6}  {:>12}  {:>12}  {:>12}",
        "τ", "τ_QSL", "D(ρτ,ρτ+1)", "Tr ρτ²"
    );
    let mut sharpest = (0.0, f64::INFINITY, 0.0);
    for k in 0..=80 {
        let tau = 0.25 * k as f64;
        let rho_tau = evolve_closed_form(&rho0, &params, tau).unwrap();
        let rho_end = evolve_closed_form(&rho_tau, &params, tau_d).unwrap();
        let r = qsl_mixed(&rho_tau, &params, tau, tau_d, 201).unwrap();
        let dist = trace_distance(&rho_tau, &rho_end).unwrap();
        if k % 4 == 0 {
            println!(
                "{tau:>6.2}  {:>12.3e}  {:>12.6}  {:>12.6}",
                r.tau_qsl,
                dist,
                rho_tau.purity()
            );
        }
        if r.tau_qsl < sharpest.1 {
            sharpest = (tau, r.tau_qsl, dist);
        }
    }
    println!();
    println!(
        "sharpest window: τ = {:.2}, τ_QSL = {:.3e}, trace distance = {:.4}",
        sharpest.0, sharpest.1, sharpest.2
    );
}
