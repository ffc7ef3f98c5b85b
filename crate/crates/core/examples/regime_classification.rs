//! Classify the three regimes of H = -ω σx - iγ σz by the energy spectrum:
//! real and split for |Δ| < 1, degenerate at the exceptional points Δ = ±1,
//! purely imaginary for |Δ| > 1.

use qsl_lab::dynamics::{energy_eigenvalues, ModelParams};

fn main() {
    println!(
        "{:>8}  {:>18}  {:>24}  {:>18}",
        "Δ", "regime", "E±/ω", "γ₁ = √(Δ²-1)"
    );
    for delta in [0.0, 0.4, 0.9, 0.999, 1.0, 1.001, 1.1, 2.5, -1.0, -2.5] {
        let p = ModelParams::from_delta(delta).unwrap();
        let (e_plus, e_minus) = energy_eigenvalues(&p);
        println!(
            "{delta:>8.3}  {:>18}  {:>11.4} / {:>10.4}  {:>18.6}",
            p.regime().to_string(),
            e_plus,
            e_minus,
            p.gamma1()
        );
    }
}
