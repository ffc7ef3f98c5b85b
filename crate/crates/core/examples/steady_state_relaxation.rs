//! PT-broken phase: the normalized state relaxes to a fixed point, so the
//! generator norm decays and the speed limit becomes trivial at late times.
//! Compares the closed form against the RK4 integrator along the way.

use qsl_lab::dynamics::{
    evolve_closed_form, generator, integrate_ode, DensityMatrix, ModelParams,
};
use qsl_lab::matrix2::SchattenNorm;

fn main() {
    let params = ModelParams::from_delta(2.5).unwrap();
    let psi0 = DensityMatrix::excited();

    let t_max = 6.0;
    let traj = integrate_ode(&psi0, &params, t_max, 6000).unwrap();

    println!(
        "{:>5}  {:>12}  {:>12}  {:>12}",
        "t", "p(t)", "‖Lρ‖∞", "|closed-RK4|"
    );
    for k in (0..=6000).step_by(1000) {
        let t = traj.times[k];
        let rho = &traj.states[k];
        let closed = evolve_closed_form(&psi0, &params, t).unwrap();
        println!(
            "{t:>5.1}  {:>12.8}  {:>12.3e}  {:>12.3e}",
            rho.excited_population(),
            generator(rho, &params).schatten_norm(SchattenNorm::Operator),
            rho.matrix().max_entry_distance(closed.matrix())
        );
    }

    let late = evolve_closed_form(&psi0, &params, 50.0).unwrap();
    let gamma1 = params.gamma1().re;
    println!();
    println!("steady excited population p_∞ = {:.8}", late.excited_population());
    println!("prediction (1 - γ₁/Δ)/2      = {:.8}", 0.5 * (1.0 - gamma1 / 2.5));
}
