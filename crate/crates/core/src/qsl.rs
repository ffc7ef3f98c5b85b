//! Quantum-speed-limit bounds and the distinguishability measures they use.
//!
//! Two bounds are implemented:
//! - [`qsl_pure`], the Deffner–Lutz bound for a pure initial state:
//!   `τ_QSL = max_p (1/Λ^p) · sin²B(ρ₀, ρ_{τ_D})` with
//!   `Λ^p = τ_D⁻¹ ∫ ‖Lρ_t‖_p dt` over p ∈ {1, 2, ∞}. The Schatten norm
//!   ordering makes the maximum always land on p = ∞.
//! - [`qsl_mixed`], the Zhang relative-purity bound valid for mixed initial
//!   states, built from time averages of the singular values of the
//!   generator paired against those of the initial state.
//!
//! Time averages use composite Simpson quadrature over an odd uniform grid.

use thiserror::Error;

use crate::dynamics::{self, DensityMatrix, DynamicsError, ModelParams, Trajectory};
use crate::matrix2::SchattenNorm;

#[derive(Debug, Error)]
pub enum QslError {
    #[error("NotPure: Tr(ρ²) = {0}")]
    NotPure(f64),
    #[error("DegeneratePurity: Tr(ρ²) = {0:.3e}")]
    DegeneratePurity(f64),
    #[error("BadGrid: {0}")]
    BadGrid(String),
    /// An arccos/sqrt argument strayed outside its domain by more than the
    /// clamping tolerance; signals a genuine bug upstream.
    #[error("NumericalDomain: argument {0} outside [{1}, {2}]")]
    NumericalDomain(f64, f64, f64),
    #[error("QuadratureNonconvergent: result still moving by {0:.3e} at {1} nodes")]
    QuadratureNonconvergent(f64, usize),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Which bound produced a [`QslResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    DeffnerLutzPure,
    ZhangMixed,
}

/// Time-averaged Schatten norms of the generator over the driving window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenAverages {
    pub trace: f64,
    pub hilbert_schmidt: f64,
    pub operator: f64,
}

impl SchattenAverages {
    pub fn get(&self, p: SchattenNorm) -> f64 {
        match p {
            SchattenNorm::Trace => self.trace,
            SchattenNorm::HilbertSchmidt => self.hilbert_schmidt,
            SchattenNorm::Operator => self.operator,
        }
    }
}

/// Time averages specific to the mixed-state bound: the paired singular-value
/// product `avg Σ σᵢ ϱᵢ` and the quadrature term `avg √(Σ σᵢ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedAverages {
    pub paired_product: f64,
    pub quadrature: f64,
}

/// Components of a QSL evaluation over one driving window.
#[derive(Debug, Clone, Copy)]
pub struct QslResult {
    pub tau_d: f64,
    pub lambda: SchattenAverages,
    /// `sin²B` for the pure bound; `|f - 1| Tr(ρ_τ²)` for the mixed bound.
    pub distinguishability: f64,
    pub tau_qsl: f64,
    pub bound_kind: BoundKind,
    pub mixed_terms: Option<MixedAverages>,
}

/// Bures angle `arccos √(⟨ψ₀|ρ|ψ₀⟩)` between a pure state and a target.
pub fn bures_angle(psi0: &DensityMatrix, rho: &DensityMatrix) -> Result<f64, QslError> {
    let purity = psi0.purity();
    if purity < 1.0 - 1e-8 {
        return Err(QslError::NotPure(purity));
    }
    let overlap = (*psi0.matrix() * *rho.matrix()).trace().re;
    let fidelity = clamp_into(overlap, 0.0, 1.0)?;
    Ok(fidelity.sqrt().acos())
}

/// Relative purity `f = Tr(ρ_end ρ_τ) / Tr(ρ_τ²)`.
pub fn relative_purity(rho_tau: &DensityMatrix, rho_end: &DensityMatrix) -> Result<f64, QslError> {
    let denom = rho_tau.purity();
    if denom <= 1e-14 {
        return Err(QslError::DegeneratePurity(denom));
    }
    Ok((*rho_end.matrix() * *rho_tau.matrix()).trace().re / denom)
}

/// Trace distance `D(ρ₁, ρ₂) = (1/2) Σ |eig(ρ₁ - ρ₂)|` in [0, 1].
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64, QslError> {
    let diff = (*rho1.matrix() - *rho2.matrix()).hermitian_part();
    let eig = diff
        .hermitian_eigensystem()
        .expect("difference of Hermitian matrices is Hermitian");
    Ok(0.5 * (eig.values[0].abs() + eig.values[1].abs()))
}

/// Time average of `‖Lρ_t‖_p` over the trajectory window by composite
/// Simpson quadrature.
pub fn averaged_schatten(traj: &Trajectory, p: SchattenNorm) -> Result<f64, QslError> {
    let values: Vec<f64> = traj.generators.iter().map(|g| g.schatten_norm(p)).collect();
    simpson_average(&values, traj)
}

fn simpson_average(values: &[f64], traj: &Trajectory) -> Result<f64, QslError> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(QslError::BadGrid(format!(
            "Simpson quadrature needs an odd node count >= 3, got {n}"
        )));
    }
    let h = traj.spacing();
    let mut sum = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        sum += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let (a, b) = traj.window();
    Ok(sum * h / 3.0 / (b - a))
}

fn all_schatten_averages(traj: &Trajectory) -> Result<SchattenAverages, QslError> {
    Ok(SchattenAverages {
        trace: averaged_schatten(traj, SchattenNorm::Trace)?,
        hilbert_schmidt: averaged_schatten(traj, SchattenNorm::HilbertSchmidt)?,
        operator: averaged_schatten(traj, SchattenNorm::Operator)?,
    })
}

fn clamp_into(x: f64, lo: f64, hi: f64) -> Result<f64, QslError> {
    if x < lo - 1e-12 || x > hi + 1e-12 {
        return Err(QslError::NumericalDomain(x, lo, hi));
    }
    Ok(x.clamp(lo, hi))
}

/// Deffner–Lutz bound for a pure initial state over the window `[0, tau_d]`.
pub fn qsl_pure(
    psi0: &DensityMatrix,
    params: &ModelParams,
    tau_d: f64,
    nodes: usize,
) -> Result<QslResult, QslError> {
    let purity = psi0.purity();
    if purity < 1.0 - 1e-8 {
        return Err(QslError::NotPure(purity));
    }
    let traj = dynamics::sample_trajectory(psi0, params, 0.0, tau_d, nodes)?;
    let lambda = all_schatten_averages(&traj)?;
    debug_assert!(lambda.operator <= lambda.hilbert_schmidt + 1e-12);
    debug_assert!(lambda.hilbert_schmidt <= lambda.trace + 1e-12);

    let angle = bures_angle(psi0, traj.states.last().unwrap())?;
    let distinguishability = angle.sin().powi(2);
    // Norm ordering makes 1/Λ^∞ the largest reciprocal.
    let tau_qsl = if distinguishability < 1e-14 {
        0.0
    } else {
        distinguishability / lambda.operator
    };
    Ok(QslResult {
        tau_d,
        lambda,
        distinguishability,
        tau_qsl,
        bound_kind: BoundKind::DeffnerLutzPure,
        mixed_terms: None,
    })
}

/// Zhang relative-purity bound for the window `[tau, tau + tau_d]` starting
/// from the (possibly mixed) state `rho_tau` at time `tau`. The dynamics is
/// time-homogeneous, so the window is evolved directly from `rho_tau`.
pub fn qsl_mixed(
    rho_tau: &DensityMatrix,
    params: &ModelParams,
    tau: f64,
    tau_d: f64,
    nodes: usize,
) -> Result<QslResult, QslError> {
    if tau < 0.0 {
        return Err(QslError::BadGrid(format!("tau must be >= 0, got {tau}")));
    }
    let traj = dynamics::sample_trajectory(rho_tau, params, 0.0, tau_d, nodes)?;
    let lambda = all_schatten_averages(&traj)?;

    // Descending singular values of the initial state, constant over the
    // window; paired descending against those of the generator at each node.
    // ρ is Hermitian positive semidefinite, so its singular values are its
    // eigenvalues; taking them directly avoids squaring through ρ†ρ, which
    // would halve the precision of the small one for near-pure states.
    let ev = rho_tau.eigenvalues();
    let (varrho1, varrho2) = (ev[0].max(0.0), ev[1].max(0.0));
    let paired: Vec<f64> = traj
        .generators
        .iter()
        .map(|g| {
            let s = g.singular_values();
            s.sigma1 * varrho1 + s.sigma2 * varrho2
        })
        .collect();
    let paired_product = simpson_average(&paired, &traj)?;
    let quadrature = lambda.hilbert_schmidt;
    debug_assert!(paired_product <= quadrature + 1e-12);

    let f = relative_purity(rho_tau, traj.states.last().unwrap())?;
    let distinguishability = (f - 1.0).abs() * rho_tau.purity();
    let tau_qsl = if distinguishability < 1e-14 {
        0.0
    } else {
        distinguishability / paired_product.min(quadrature)
    };
    Ok(QslResult {
        tau_d,
        lambda,
        distinguishability,
        tau_qsl,
        bound_kind: BoundKind::ZhangMixed,
        mixed_terms: Some(MixedAverages {
            paired_product,
            quadrature,
        }),
    })
}
