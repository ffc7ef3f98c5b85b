//! The non-Hermitian detuning model and its non-unitary qubit dynamics.
//!
//! The Hamiltonian is `H = -ω σx - i γ σz = -ω [[iΔ, 1], [1, -iΔ]]` with
//! Δ = γ/ω. Three evolution routes are provided and must agree:
//!
//! 1. [`evolve_closed_form`]: the literal closed-form matrix elements of the
//!    renormalized state, with a series branch near the exceptional points.
//! 2. [`evolve_propagator`]: `ρ_t = U ρ₀ U† / Tr(U ρ₀ U†)` with
//!    `U = exp(-i H t)` from the matrix exponential.
//! 3. [`integrate_ode`]: fixed-step RK4 on the norm-preserving evolution
//!    equation `dρ/dt = -i[H₊, ρ] - {Γ, ρ} + 2 Tr(ρΓ) ρ`.
//!
//! Basis convention: `|1⟩ = (1,0)ᵀ` is the excited state and `σz|1⟩ = +|1⟩`,
//! so positive γ decays the excited population.

use std::fmt;

use thiserror::Error;

use crate::matrix2::{Complex, ComplexMatrix2};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
    #[error("InvalidDensityMatrix: {0}")]
    InvalidDensityMatrix(String),
    /// The renormalization trace collapsed below 1e-14; signals overflow at
    /// extreme γt rather than a physical situation.
    #[error("DegenerateNormalization: Tr(U ρ U†) = {0:.3e}")]
    DegenerateNormalization(f64),
    /// An RK4 intermediate exceeded 1e12 in entry magnitude.
    #[error("StepOverflow: entry magnitude {0:.3e} at t = {1}")]
    StepOverflow(f64, f64),
    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),
}

/// PT phase of the Hamiltonian, decided by |Δ| against 1 (tolerance 1e-12).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtRegime {
    PtSymmetric,
    ExceptionalPoint,
    PtBroken,
}

impl fmt::Display for PtRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PtRegime::PtSymmetric => "pt_symmetric",
            PtRegime::ExceptionalPoint => "exceptional_point",
            PtRegime::PtBroken => "pt_broken",
        };
        f.write_str(s)
    }
}

/// Model parameters (ω, γ) with the derived ratio Δ = γ/ω and
/// γ₁ = √(Δ² - 1) taken as the principal complex square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    gamma: f64,
}

impl ModelParams {
    pub fn new(omega: f64, gamma: f64) -> Result<Self, DynamicsError> {
        if !omega.is_finite() || !gamma.is_finite() {
            return Err(DynamicsError::InvalidParams(
                "omega and gamma must be finite".into(),
            ));
        }
        if omega == 0.0 {
            return Err(DynamicsError::InvalidParams("omega must be nonzero".into()));
        }
        Ok(Self { omega, gamma })
    }

    /// ω = 1 convention used throughout the sweeps: Δ coincides with γ.
    pub fn from_delta(delta: f64) -> Result<Self, DynamicsError> {
        Self::new(1.0, delta)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.gamma / self.omega
    }

    /// Principal square root of Δ² - 1: purely imaginary in the PT-symmetric
    /// phase, zero at the exceptional points, positive real when broken.
    pub fn gamma1(&self) -> Complex {
        let d2 = self.delta() * self.delta() - 1.0;
        if d2 >= 0.0 {
            Complex::new(d2.sqrt(), 0.0)
        } else {
            Complex::new(0.0, (-d2).sqrt())
        }
    }

    pub fn regime(&self) -> PtRegime {
        let a = self.delta().abs();
        if (a - 1.0).abs() <= 1e-12 {
            PtRegime::ExceptionalPoint
        } else if a < 1.0 {
            PtRegime::PtSymmetric
        } else {
            PtRegime::PtBroken
        }
    }
}

/// Normalized qubit state: Hermitian, unit trace, positive semidefinite
/// (each within 1e-10).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix2,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(m: ComplexMatrix2) -> Result<Self, DynamicsError> {
        if !m.is_finite() {
            return Err(DynamicsError::InvalidDensityMatrix(
                "non-finite entries".into(),
            ));
        }
        let herm_dev = m.max_entry_distance(&m.adjoint());
        if herm_dev > 1e-10 {
            return Err(DynamicsError::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - Complex::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(DynamicsError::InvalidDensityMatrix(format!(
                "trace {} != 1",
                tr
            )));
        }
        let eig = m
            .hermitian_part()
            .hermitian_eigensystem()
            .expect("hermitian part is Hermitian");
        if eig.values[1] < -1e-10 {
            return Err(DynamicsError::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                eig.values[1]
            )));
        }
        Ok(Self { m })
    }

    /// Hermitize and renormalize an unnormalized Hermitian-up-to-rounding
    /// matrix coming out of an evolution route.
    fn from_unnormalized(m: ComplexMatrix2) -> Result<Self, DynamicsError> {
        if !m.is_finite() {
            return Err(DynamicsError::InvalidDensityMatrix(
                "non-finite entries".into(),
            ));
        }
        let h = m.hermitian_part();
        let t = h.trace().re;
        if t < 1e-14 {
            return Err(DynamicsError::DegenerateNormalization(t));
        }
        Ok(Self {
            m: h.scale(Complex::new(1.0 / t, 0.0)),
        })
    }

    /// Excited state `|1⟩⟨1|`.
    pub fn excited() -> Self {
        Self {
            m: ComplexMatrix2::diag(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
        }
    }

    /// Ground state `|0⟩⟨0|`.
    pub fn ground() -> Self {
        Self {
            m: ComplexMatrix2::diag(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)),
        }
    }

    /// Mixed state `(1 - p/2)|1⟩⟨1| + (p/2)|0⟩⟨0|` with 0 < p < 1.
    pub fn mixed(p: f64) -> Result<Self, DynamicsError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(DynamicsError::InvalidParams(format!(
                "mixed weight p must lie in (0, 1), got {p}"
            )));
        }
        Ok(Self {
            m: ComplexMatrix2::diag(
                Complex::new(1.0 - p / 2.0, 0.0),
                Complex::new(p / 2.0, 0.0),
            ),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.m
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - 1e-8
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        self.m
            .hermitian_part()
            .hermitian_eigensystem()
            .expect("density matrix is Hermitian")
            .values
    }

    /// Population of the excited level, `Re ρ¹¹` clamped to [0, 1].
    pub fn excited_population(&self) -> f64 {
        self.m.a11.re.clamp(0.0, 1.0)
    }
}

/// Time grid with the state and the generator value `Lρ` at each node.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub generators: Vec<ComplexMatrix2>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    pub fn window(&self) -> (f64, f64) {
        (self.times[0], self.times[self.len() - 1])
    }
}

/// `H = -ω [[iΔ, 1], [1, -iΔ]]`, the full non-Hermitian Hamiltonian.
pub fn hamiltonian(params: &ModelParams) -> ComplexMatrix2 {
    let d = params.delta();
    ComplexMatrix2::new(
        Complex::new(0.0, d),
        Complex::new(1.0, 0.0),
        Complex::new(1.0, 0.0),
        Complex::new(0.0, -d),
    )
    .scale(Complex::new(-params.omega(), 0.0))
}

/// Hermitian part `H₊ = -ω σx`.
pub fn hermitian_hamiltonian(params: &ModelParams) -> ComplexMatrix2 {
    ComplexMatrix2::sigma_x() * (-params.omega())
}

/// Decay-rate operator `Γ = γ σz` (the anti-Hermitian part is `-iΓ`).
pub fn decay_operator(params: &ModelParams) -> ComplexMatrix2 {
    ComplexMatrix2::sigma_z() * params.gamma()
}

/// Eigenvalues `E± = ±ω√(1 - Δ²)`: real in the PT-symmetric phase, zero at
/// the exceptional points, purely imaginary when broken.
pub fn energy_eigenvalues(params: &ModelParams) -> (Complex, Complex) {
    let d2 = 1.0 - params.delta() * params.delta();
    let root = if d2 >= 0.0 {
        Complex::new(d2.sqrt(), 0.0)
    } else {
        Complex::new(0.0, (-d2).sqrt())
    };
    let e = root * Complex::new(params.omega(), 0.0);
    (e, -e)
}

/// Non-unitary propagator `U = exp(-i H t)`.
pub fn propagator(params: &ModelParams, t: f64) -> ComplexMatrix2 {
    hamiltonian(params)
        .scale(Complex::new(0.0, -t))
        .matrix_exponential()
}

/// Evolution via the propagator route: `ρ_t = U ρ₀ U† / Tr(U ρ₀ U†)`.
/// Cross-checks the closed-form transcription.
pub fn evolve_propagator(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t: f64,
) -> Result<DensityMatrix, DynamicsError> {
    let u = propagator(params, t);
    let omega_t = u * *rho0.matrix() * u.adjoint();
    DensityMatrix::from_unnormalized(omega_t)
}

/// Evolution via the literal closed-form matrix elements of the renormalized
/// state. One complex-γ₁ code path covers both PT phases; for |γ₁t| < 1e-4
/// the cosh/sinhc factors switch to their series limits, which also covers
/// the defective exceptional points exactly.
pub fn evolve_closed_form(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t: f64,
) -> Result<DensityMatrix, DynamicsError> {
    if !t.is_finite() {
        return Err(DynamicsError::InvalidParams("t must be finite".into()));
    }
    let d = params.delta();
    let g1 = params.gamma1();
    let g1_sq = Complex::new(d * d - 1.0, 0.0);
    let th = params.omega() * t; // dimensionless time ωt
    let x = g1 * th;

    // c = cosh(γ₁ ωt), u = sinh(γ₁ ωt)/γ₁. γ₁ is real or purely imaginary,
    // so both are real in exact arithmetic; they stay complex here and the
    // result is Hermitized at the end.
    let (cosh_x, u) = if x.norm() < 1e-4 {
        let x2 = x * x;
        let cosh_x = Complex::new(1.0, 0.0) + x2 / 2.0 + x2 * x2 / 24.0;
        let sinhc = Complex::new(1.0, 0.0) + x2 / 6.0 + x2 * x2 / 120.0;
        (cosh_x, sinhc * th)
    } else {
        (x.cosh(), x.sinh() / g1)
    };

    let r11 = rho0.matrix().a11;
    let r12 = rho0.matrix().a12;
    let r21 = rho0.matrix().a21;
    let r22 = rho0.matrix().a22;
    let w = r12 - r21; // 2i Im ρ₀¹² for Hermitian input
    let i = Complex::i();

    let c2 = cosh_x * cosh_x;
    let u2 = u * u; // sinh²(γ₁t)/γ₁²
    let s2 = u * cosh_x * 2.0; // sinh(2γ₁t)/γ₁

    // Unnormalized matrix elements; dividing by their trace reproduces the
    // published 1/(γ₁²T) form with every 1/γ₁² absorbed into u² and s2.
    let n11 = r11 * c2 + (Complex::new(1.0, 0.0) + i * d * w) * u2 + r11 * g1_sq * u2
        - (r11 * d + i * w * 0.5) * s2;
    let n12 = r12 * c2 + (i * d - r12 * (d * d) + r21) * u2 + i * (Complex::new(1.0, 0.0) - r11 * 2.0) * s2 * 0.5;
    let du = u * d;
    let n22 = r11 * u2 + r22 * (cosh_x + du) * (cosh_x + du) + i * u * (cosh_x + du) * w;

    // The trace is real up to rounding; dividing by the real part avoids
    // the |T|² overflow of complex division at large γ₁t.
    let trace = (n11 + n22).re;
    if !trace.is_finite() || trace < 1e-14 {
        return Err(DynamicsError::DegenerateNormalization(trace));
    }
    let inv = Complex::new(1.0 / trace, 0.0);
    let rho11 = n11 * inv;
    let rho12 = n12 * inv;
    let m = ComplexMatrix2::new(
        rho11,
        rho12,
        rho12.conj(),
        Complex::new(1.0, 0.0) - rho11,
    );
    DensityMatrix::from_unnormalized(m)
}

/// Generator of the norm-preserving evolution:
/// `Lρ = -i[H₊, ρ] - {Γ, ρ} + 2 Tr(ρΓ) ρ`. Hermitian and traceless.
pub fn generator(rho: &DensityMatrix, params: &ModelParams) -> ComplexMatrix2 {
    generator_of(rho.matrix(), params)
}

fn generator_of(m: &ComplexMatrix2, params: &ModelParams) -> ComplexMatrix2 {
    let h_plus = hermitian_hamiltonian(params);
    let gam = decay_operator(params);
    let comm = h_plus * *m - *m * h_plus;
    let anti = gam * *m + *m * gam;
    let feedback = (*m * gam).trace() * 2.0;
    comm.scale(-Complex::i()) - anti + m.scale(feedback)
}

/// Classical fixed-step RK4 on the norm-preserving evolution equation.
/// The state is re-Hermitized and trace-renormalized after each step; the
/// recorded trajectory carries the generator at every node.
pub fn integrate_ode(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory, DynamicsError> {
    if steps < 1 {
        return Err(DynamicsError::InvalidGrid("steps must be >= 1".into()));
    }
    if !(t_end > 0.0) {
        return Err(DynamicsError::InvalidGrid("t_end must be positive".into()));
    }
    let h = t_end / steps as f64;
    let mut m = *rho0.matrix();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut generators = Vec::with_capacity(steps + 1);

    let record = |times: &mut Vec<f64>,
                  states: &mut Vec<DensityMatrix>,
                  generators: &mut Vec<ComplexMatrix2>,
                  t: f64,
                  m: &ComplexMatrix2|
     -> Result<(), DynamicsError> {
        let dm = DensityMatrix::from_unnormalized(*m)?;
        generators.push(generator(&dm, params));
        states.push(dm);
        times.push(t);
        Ok(())
    };

    record(&mut times, &mut states, &mut generators, 0.0, &m)?;
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = generator_of(&m, params);
        let k2 = generator_of(&(m + k1 * (h / 2.0)), params);
        let k3 = generator_of(&(m + k2 * (h / 2.0)), params);
        let k4 = generator_of(&(m + k3 * h), params);
        m = m + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let mag = m.max_abs();
        if mag > 1e12 {
            return Err(DynamicsError::StepOverflow(mag, t + h));
        }
        // Drift suppression: project back onto Hermitian unit-trace matrices.
        m = m.hermitian_part();
        let tr = m.trace().re;
        if tr < 1e-14 {
            return Err(DynamicsError::DegenerateNormalization(tr));
        }
        m = m.scale(Complex::new(1.0 / tr, 0.0));
        record(&mut times, &mut states, &mut generators, t + h, &m)?;
    }
    Ok(Trajectory {
        times,
        states,
        generators,
    })
}

/// Sample the closed-form evolution of `rho0` (the state at t = 0) on a
/// uniform grid over `[t_start, t_end]`. Node count must be odd and >= 3 so
/// the trajectory feeds composite Simpson quadrature directly.
pub fn sample_trajectory(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t_start: f64,
    t_end: f64,
    nodes: usize,
) -> Result<Trajectory, DynamicsError> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(DynamicsError::InvalidGrid(format!(
            "node count must be odd and >= 3, got {nodes}"
        )));
    }
    if !(t_end > t_start) {
        return Err(DynamicsError::InvalidGrid(
            "t_end must exceed t_start".into(),
        ));
    }
    let h = (t_end - t_start) / (nodes - 1) as f64;
    let mut times = Vec::with_capacity(nodes);
    let mut states = Vec::with_capacity(nodes);
    let mut generators = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let t = t_start + k as f64 * h;
        let state = if t == 0.0 {
            *rho0
        } else {
            evolve_closed_form(rho0, params, t)?
        };
        generators.push(generator(&state, params));
        states.push(state);
        times.push(t);
    }
    Ok(Trajectory {
        times,
        states,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix2::SchattenNorm;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn params(delta: f64) -> ModelParams {
        ModelParams::from_delta(delta).unwrap()
    }

    #[test]
    fn params_validation_and_regimes() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert_eq!(params(0.5).regime(), PtRegime::PtSymmetric);
        assert_eq!(params(1.0).regime(), PtRegime::ExceptionalPoint);
        assert_eq!(params(-1.0).regime(), PtRegime::ExceptionalPoint);
        assert_eq!(params(2.5).regime(), PtRegime::PtBroken);
    }

    #[test]
    fn gamma1_square_identity() {
        for delta in [-3.0, -1.0, -0.5, 0.0, 0.3, 1.0, 1.5, 7.0] {
            let p = params(delta);
            let g1 = p.gamma1();
            let sq = g1 * g1;
            assert!((sq - c(delta * delta - 1.0, 0.0)).norm() < 1e-14);
            // Principal root: imaginary part >= 0, real part >= 0.
            assert!(g1.re >= 0.0 && g1.im >= 0.0);
        }
    }

    #[test]
    fn hamiltonian_limits() {
        let h = hamiltonian(&params(0.0));
        assert!(h.max_entry_distance(&(ComplexMatrix2::sigma_x() * -1.0)) < 1e-15);

        let h = hamiltonian(&params(0.6));
        let expected = ComplexMatrix2::new(c(0.0, -0.6), c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.6));
        assert!(h.max_entry_distance(&expected) < 1e-15);
    }

    #[test]
    fn hamiltonian_anti_hermitian_part() {
        for gamma in [0.3, 0.9, 2.5, -1.7] {
            let p = params(gamma);
            let h = hamiltonian(&p);
            let anti = h - h.adjoint();
            let expected = ComplexMatrix2::sigma_z().scale(c(0.0, -2.0 * gamma));
            assert!(anti.max_entry_distance(&expected) < 1e-14);
        }
    }

    #[test]
    fn energy_eigenvalues_by_regime() {
        let (ep, em) = energy_eigenvalues(&params(0.6));
        assert!((ep - c(0.8, 0.0)).norm() < 1e-14);
        assert!((em - c(-0.8, 0.0)).norm() < 1e-14);

        let (ep, em) = energy_eigenvalues(&params(1.0));
        assert!(ep.norm() < 1e-14 && em.norm() < 1e-14);

        // Oracle: roots of the characteristic polynomial of H at Δ = 2.5,
        // λ² - tr λ + det = λ² + (Δ² - 1), giving ±i√(Δ²-1).
        let (ep, _) = energy_eigenvalues(&params(2.5));
        assert!((ep - c(0.0, 5.25f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn propagator_basics() {
        let u = propagator(&params(0.9), 0.0);
        assert!(u.max_entry_distance(&ComplexMatrix2::identity()) < 1e-14);

        // Hermitian limit: unitary.
        let u = propagator(&params(0.0), 1.7);
        let gram = u.adjoint() * u;
        assert!(gram.max_entry_distance(&ComplexMatrix2::identity()) < 1e-10);

        // γ != 0: visibly non-unitary.
        let u = propagator(&params(0.9), 1.0);
        let gram = u.adjoint() * u;
        assert!(gram.max_entry_distance(&ComplexMatrix2::identity()) > 0.1);
    }

    #[test]
    fn density_matrix_constructors() {
        assert!((DensityMatrix::excited().excited_population() - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::ground().excited_population() < 1e-15);
        let m = DensityMatrix::mixed(0.6).unwrap();
        assert!((m.excited_population() - 0.7).abs() < 1e-15);
        assert!(DensityMatrix::mixed(0.0).is_err());
        assert!(DensityMatrix::mixed(1.0).is_err());
        assert!(DensityMatrix::new(ComplexMatrix2::identity()).is_err()); // trace 2
    }

    #[test]
    fn closed_form_at_t_zero_is_identity_map() {
        let rho = DensityMatrix::mixed(0.4).unwrap();
        let out = evolve_closed_form(&rho, &params(1.7), 0.0).unwrap();
        assert!(out.matrix().max_entry_distance(rho.matrix()) < 1e-14);
    }

    #[test]
    fn closed_form_rabi_limit() {
        // Δ = 0 from |1⟩⟨1|: p(t) = cos²(ωt).
        let rho = evolve_closed_form(&DensityMatrix::excited(), &params(0.0), 1.0).unwrap();
        assert!((rho.excited_population() - 1f64.cos().powi(2)).abs() < 1e-12);

        let rho = evolve_closed_form(
            &DensityMatrix::excited(),
            &params(0.0),
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap();
        assert!(rho.excited_population() < 1e-12);
    }

    #[test]
    fn closed_form_matches_rk4_oracle() {
        let p = params(2.5);
        let rho0 = DensityMatrix::excited();
        let traj = integrate_ode(&rho0, &p, 1.0, 100_000).unwrap();
        let closed = evolve_closed_form(&rho0, &p, 1.0).unwrap();
        let diff = closed
            .matrix()
            .max_entry_distance(traj.states.last().unwrap().matrix());
        assert!(diff < 1e-8, "diff = {diff:e}");
    }

    #[test]
    fn route_equivalence_panel() {
        let rho0 = DensityMatrix::mixed(0.6).unwrap();
        for delta in [0.0, 0.4, 0.9, 0.999, 1.0, 1.001, 1.1, 2.5, -1.0, -2.5] {
            for t in [0.1, 1.0, 5.0] {
                let p = params(delta);
                let a = evolve_closed_form(&rho0, &p, t).unwrap();
                let b = evolve_propagator(&rho0, &p, t).unwrap();
                let diff = a.matrix().max_entry_distance(b.matrix());
                assert!(diff < 1e-10, "Δ={delta}, t={t}: diff = {diff:e}");
            }
        }
    }

    #[test]
    fn unitary_limit_preserves_spectrum() {
        let rho0 = DensityMatrix::mixed(0.6).unwrap();
        let out = evolve_propagator(&rho0, &params(0.0), 2.3).unwrap();
        let before = rho0.eigenvalues();
        let after = out.eigenvalues();
        assert!((before[0] - after[0]).abs() < 1e-10);
        assert!((before[1] - after[1]).abs() < 1e-10);
    }

    #[test]
    fn generator_examples() {
        // Maximally mixed state at γ = 0: fixed point.
        let half = DensityMatrix::new(ComplexMatrix2::identity() * 0.5).unwrap();
        let g = generator(&half, &params(0.0));
        assert!(g.max_abs() < 1e-15);

        // Oracle (hand-expanded commutator): Δ = 0, ρ = |1⟩⟨1| gives
        // -i[-σx, ρ] = [[0, -i], [i, 0]] with operator norm 1.
        let g = generator(&DensityMatrix::excited(), &params(0.0));
        let expected = ComplexMatrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!(g.max_entry_distance(&expected) < 1e-14);
        assert!((g.schatten_norm(SchattenNorm::Operator) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generator_vanishes_at_steady_state() {
        let p = params(2.5);
        let rho = evolve_closed_form(&DensityMatrix::excited(), &p, 50.0).unwrap();
        let g = generator(&rho, &p);
        assert!(g.schatten_norm(SchattenNorm::Operator) < 1e-6);
    }

    #[test]
    fn rk4_order_of_convergence() {
        let p = params(2.5);
        let rho0 = DensityMatrix::excited();
        let reference = evolve_closed_form(&rho0, &p, 1.0).unwrap();
        let err = |steps: usize| {
            let traj = integrate_ode(&rho0, &p, 1.0, steps).unwrap();
            traj.states
                .last()
                .unwrap()
                .matrix()
                .max_entry_distance(reference.matrix())
        };
        let ratio = err(1000) / err(2000);
        assert!(
            (11.2..=20.8).contains(&ratio),
            "RK4 error ratio {ratio} outside 16 ± 30%"
        );
    }

    #[test]
    fn rk4_trace_is_exactly_renormalized() {
        let traj = integrate_ode(&DensityMatrix::excited(), &params(0.9), 1.0, 1000).unwrap();
        for s in &traj.states {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_trajectory_contract() {
        let rho0 = DensityMatrix::excited();
        let p = params(0.9);
        let traj = sample_trajectory(&rho0, &p, 0.0, 1.0, 3).unwrap();
        assert_eq!(traj.len(), 3);
        assert!(traj.states[0].matrix().max_entry_distance(rho0.matrix()) < 1e-15);

        // Uniform spacing.
        let traj = sample_trajectory(&rho0, &p, 0.5, 2.5, 11).unwrap();
        let h = traj.spacing();
        for w in traj.times.windows(2) {
            assert!(((w[1] - w[0]) - h).abs() < 1e-12 * h.abs());
        }

        assert!(sample_trajectory(&rho0, &p, 0.0, 1.0, 4).is_err());
        assert!(sample_trajectory(&rho0, &p, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn sample_trajectory_matches_ode_nodes() {
        let rho0 = DensityMatrix::excited();
        let p = params(1.3);
        let sampled = sample_trajectory(&rho0, &p, 0.0, 2.0, 21).unwrap();
        let ode = integrate_ode(&rho0, &p, 2.0, 20_000).unwrap();
        for (k, s) in sampled.states.iter().enumerate() {
            let o = &ode.states[k * 1000];
            assert!(s.matrix().max_entry_distance(o.matrix()) < 1e-8);
        }
    }

    #[test]
    fn pt_symmetric_population_is_periodic() {
        for delta in [0.4, 0.9] {
            let p = params(delta);
            let period = std::f64::consts::PI / (1.0 - delta * delta).sqrt();
            for k in 0..40 {
                let t = 0.25 * k as f64;
                let a = evolve_closed_form(&DensityMatrix::excited(), &p, t).unwrap();
                let b = evolve_closed_form(&DensityMatrix::excited(), &p, t + period).unwrap();
                assert!((a.excited_population() - b.excited_population()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn pt_broken_relaxes_monotonically() {
        let p = params(1.8);
        let rho0 = DensityMatrix::excited();
        let mut prev_gap = f64::INFINITY;
        // Trace-norm gap between consecutive unit-time snapshots shrinks
        // after the initial transient.
        for k in 3..20 {
            let a = evolve_closed_form(&rho0, &p, k as f64).unwrap();
            let b = evolve_closed_form(&rho0, &p, (k + 1) as f64).unwrap();
            let gap = (*a.matrix() - *b.matrix()).schatten_norm(SchattenNorm::Trace);
            assert!(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-9);
    }

    #[test]
    fn sign_symmetry_under_sigma_x_conjugation() {
        let sx = ComplexMatrix2::sigma_x();
        let rho0 = DensityMatrix::new(
            ComplexMatrix2::new(c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)),
        )
        .unwrap();
        for delta in [0.5, 0.9, 1.0, 2.5] {
            for t in [0.3, 1.0, 4.0] {
                let lhs = evolve_closed_form(&rho0, &params(delta), t).unwrap();
                let flipped = DensityMatrix::new(sx * *rho0.matrix() * sx).unwrap();
                let rhs_inner = evolve_closed_form(&flipped, &params(-delta), t).unwrap();
                let rhs = sx * *rhs_inner.matrix() * sx;
                assert!(lhs.matrix().max_entry_distance(&rhs) < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn prop_generator_hermitian_traceless(
            x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0,
            delta in -5.0f64..5.0,
        ) {
            // Random state from a Bloch vector inside the unit ball.
            let n = (x * x + y * y + z * z).sqrt();
            let (x, y, z) = if n > 1.0 { (x / n, y / n, z / n) } else { (x, y, z) };
            let m = ComplexMatrix2::new(
                c(0.5 * (1.0 + z), 0.0),
                c(0.5 * x, -0.5 * y),
                c(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z), 0.0),
            );
            let rho = DensityMatrix::new(m).unwrap();
            let g = generator(&rho, &params(delta));
            prop_assert!(g.max_entry_distance(&g.adjoint()) < 1e-12);
            prop_assert!(g.trace().norm() < 1e-12);
        }

        #[test]
        fn prop_evolution_preserves_state_invariants(
            delta in -15.0f64..15.0,
            t in 1e-3f64..20.0,
            z in -1.0f64..1.0,
        ) {
            let m = ComplexMatrix2::diag(c(0.5 * (1.0 + z), 0.0), c(0.5 * (1.0 - z), 0.0));
            let rho0 = DensityMatrix::new(m).unwrap();
            let out = evolve_closed_form(&rho0, &params(delta), t).unwrap();
            prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
            prop_assert!(out.matrix().max_entry_distance(&out.matrix().adjoint()) < 1e-10);
            prop_assert!(out.eigenvalues()[1] >= -1e-10);
        }
    }
}
