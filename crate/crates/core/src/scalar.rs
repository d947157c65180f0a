//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All algorithms are written against [`Real`], so the same code runs in
//! `f64` (the default), `f32`, or an extended-precision type such as
//! [`DoubleDouble`](crate::DoubleDouble). The precision-critical paths
//! (half-angle cosines, Wigner d-functions, metric construction) use only
//! field arithmetic and square roots, which extended types implement to
//! full accuracy.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar usable by the simulation core.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Conversion from a count or index.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn is_finite<T: Real>(z: &Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Central tolerance table.
///
/// `EXACT` is for identities that hold to rounding, `SMALL` for residuals at
/// moderate sizes (N up to about 30), `LARGE` for the largest chains (N = 100).
pub mod tol {
    pub const EXACT: f64 = 1e-12;
    pub const SMALL: f64 = 1e-10;
    pub const LARGE: f64 = 1e-8;

    /// Off-diagonal threshold of the Jacobi eigensolver, relative to `‖m‖_max`.
    pub const JACOBI_OFFDIAG: f64 = 1e-12;
    /// Sweep cap of the Jacobi eigensolver.
    pub const JACOBI_MAX_SWEEPS: usize = 100;
    /// Entrywise Hermiticity check for eigensolver input.
    pub const HERMITIAN: f64 = 1e-12;
}
