//! Non-unitary dynamics of a qubit with a non-Hermitian detuning term and the
//! quantum-speed-limit (QSL) times it admits.
//!
//! The model Hamiltonian is `H = -ω σx - i γ σz`. Its Hermitian part drives a
//! Rabi oscillation; the anti-Hermitian detuning makes the evolution
//! non-unitary, so density matrices are renormalized after propagation. The
//! dimensionless ratio Δ = γ/ω controls the PT phase: |Δ| < 1 is
//! PT-symmetric (periodic dynamics), |Δ| > 1 is PT-broken (relaxation to a
//! steady state), and Δ = ±1 are exceptional points.
//!
//! Crate layout:
//! - [`matrix2`]: closed-form complex 2x2 linear algebra (singular values,
//!   Schatten norms, Hermitian eigensystems, matrix exponential).
//! - [`dynamics`]: the model, density matrices, and three evolution routes
//!   (closed-form matrix elements, non-unitary propagator, RK4 integration).
//! - [`qsl`]: distinguishability measures and the pure-state and mixed-state
//!   QSL bounds with Simpson time averages of the generator norms.
//! - [`sweep`]: deterministic parameter sweeps emitting CSV tables.
//! - [`cli`]: the `qsl-lab` command-line front end.
//!
//! See the `examples/` directory for runnable walkthroughs of each capability.

pub mod cli;
pub mod dynamics;
pub mod matrix2;
pub mod qsl;
pub mod sweep;

pub use dynamics::{DensityMatrix, ModelParams, PtRegime, Trajectory};
pub use matrix2::{Complex, ComplexMatrix2, SchattenNorm, SingularPair};
pub use qsl::{BoundKind, QslResult};
pub use sweep::{InitialState, SweepRow, SweepSpec};
