//! Dense complex linear algebra: matrices, state vectors, a Jacobi
//! Hermitian eigensolver, an RK4 propagator used as an independent oracle,
//! and log-domain summation.

mod eigen;
mod logsum;
mod matrix;
mod rk4;
mod state;

pub use eigen::{eigen_defects, hermitian_eigensystem, HermitianEigen, MAX_EIGEN_DIM};
pub use logsum::{ln_factorial, log_stable_sum};
pub use matrix::ComplexMatrix;
pub(crate) use matrix::nan_max;
pub use rk4::{rk4_propagate, rk4_trajectory};
pub use state::StateVector;
