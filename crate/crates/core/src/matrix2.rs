//! Complex 2x2 linear algebra in closed form.
//!
//! Everything here is exact-formula arithmetic: singular values come from the
//! radical solution of the characteristic polynomial of `M† M`, the matrix
//! exponential from the trace/determinant reduction, Hermitian eigensystems
//! from the quadratic formula. No iterative solvers, no allocation.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type Complex = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum Matrix2Error {
    /// Max-entry distance from the adjoint exceeded the Hermiticity tolerance.
    #[error("NotHermitian: max-entry deviation from adjoint is {0:.3e}")]
    NotHermitian(f64),
}

/// Dense complex 2x2 matrix, the carrier for states, Hamiltonians,
/// propagators and generators. All operations return new values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

/// Singular values in descending order: `sigma1 >= sigma2 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPair {
    pub sigma1: f64,
    pub sigma2: f64,
}

/// Schatten p-norm selector for p in {1, 2, ∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenNorm {
    /// p = 1, sum of singular values.
    Trace,
    /// p = 2, Frobenius norm.
    HilbertSchmidt,
    /// p = ∞, largest singular value.
    Operator,
}

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues in descending
/// order with orthonormal eigenvectors (columns `vectors[k]`).
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; 2],
    pub vectors: [[Complex; 2]; 2],
}

const ONE: Complex = Complex::new(1.0, 0.0);
const ZERO: Complex = Complex::new(0.0, 0.0);

impl ComplexMatrix2 {
    pub const fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(a: Complex, b: Complex) -> Self {
        Self::new(a, ZERO, ZERO, b)
    }

    pub fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn sigma_y() -> Self {
        Self::new(ZERO, -Complex::i(), Complex::i(), ZERO)
    }

    pub fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, -ONE)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn trace(&self) -> Complex {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(Complex::new(0.5, 0.0))
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance to another matrix.
    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Squared Frobenius norm, the sum of squared entry magnitudes.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries().iter().map(|e| e.norm_sqr()).sum()
    }

    /// Singular values from the closed form
    /// `σ±² = (F ± sqrt(F² - 4|det|²)) / 2` with `F` the squared Frobenius
    /// norm. Tiny negative radicands from rounding are clamped to zero.
    pub fn singular_values(&self) -> SingularPair {
        // Evaluated through the entries of A = M†M: with a, c its diagonal
        // and b its off-diagonal, tr A = F and (F/2)² - |det M|² equals
        // ((a-c)/2)² + |b|², which avoids the catastrophic cancellation of
        // the radicand when the singular values are nearly equal.
        let gram = self.adjoint() * *self;
        let a = gram.a11.re;
        let c = gram.a22.re;
        let half_trace = 0.5 * (a + c);
        let root = (0.5 * (a - c)).hypot(gram.a12.norm());
        let sigma1 = (half_trace + root).max(0.0).sqrt();
        let sigma2 = (half_trace - root).max(0.0).sqrt();
        SingularPair { sigma1, sigma2 }
    }

    pub fn schatten_norm(&self, p: SchattenNorm) -> f64 {
        let sv = self.singular_values();
        match p {
            SchattenNorm::Trace => sv.sigma1 + sv.sigma2,
            SchattenNorm::HilbertSchmidt => sv.sigma1.hypot(sv.sigma2),
            SchattenNorm::Operator => sv.sigma1,
        }
    }

    /// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
    /// matrix. The input must be Hermitian to 1e-10 in max-entry distance.
    pub fn hermitian_eigensystem(&self) -> Result<HermitianEigen, Matrix2Error> {
        let dev = self.max_entry_distance(&self.adjoint());
        if dev > 1e-10 {
            return Err(Matrix2Error::NotHermitian(dev));
        }
        let m = self.hermitian_part();
        let a = m.a11.re;
        let c = m.a22.re;
        let b = m.a12;
        let mean = 0.5 * (a + c);
        let half_diff = 0.5 * (a - c);
        let r = half_diff.hypot(b.norm());
        let values = [mean + r, mean - r];

        let scale = self.max_abs().max(1.0);
        let vectors = if b.norm() <= 1e-14 * scale {
            // Diagonal within tolerance: coordinate eigenvectors ordered to
            // match the descending eigenvalues.
            if a >= c {
                [[ONE, ZERO], [ZERO, ONE]]
            } else {
                [[ZERO, ONE], [ONE, ZERO]]
            }
        } else {
            let mk = |lambda: f64| {
                let v = [b, Complex::new(lambda - a, 0.0)];
                let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                [v[0] / n, v[1] / n]
            };
            [mk(values[0]), mk(values[1])]
        };
        Ok(HermitianEigen { values, vectors })
    }

    /// Matrix exponential via the 2x2 reduction
    /// `exp(M) = e^s (cosh(q) I + sinhc(q) (M - s I))` with `s = tr(M)/2` and
    /// `q = sqrt(s² - det M)`. The defective case `q -> 0` is covered by the
    /// series branch of `sinhc`.
    pub fn matrix_exponential(&self) -> Self {
        let s = self.trace() * Complex::new(0.5, 0.0);
        let q = (s * s - self.det()).sqrt();
        let es = s.exp();
        let shifted = *self - Self::identity().scale(s);
        (Self::identity().scale(q.cosh()) + shifted.scale(sinhc(q))).scale(es)
    }
}

/// `sinh(q)/q`, with the Taylor branch `1 + q²/6 + q⁴/120` for |q| < 1e-4
/// (truncation error below 1e-24 there).
fn sinhc(q: Complex) -> Complex {
    if q.norm() < 1e-4 {
        let q2 = q * q;
        ONE + q2 / 6.0 + q2 * q2 / 120.0
    } else {
        q.sinh() / q
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<Complex> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Complex) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(Complex::new(rhs, 0.0))
    }
}
