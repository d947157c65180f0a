//! PT-symmetric engineered spin chains.
//!
//! The single-particle chain with couplings `√(l(N−l))/2` and a linear
//! imaginary potential `iγ((N+1)/2 − l)` has the equally spaced real
//! spectrum `√(1−γ²)((N+1)/2 − n)` for `|γ| < 1`. Its eigenvectors are Wigner
//! d-functions at the complex angle `β = π/2 − i·atanh γ`. This crate
//! evaluates that biorthogonal system in closed form and builds on it:
//!
//! - [`chain`]: the model matrices and the PT operation,
//! - [`angular`]: spin operators, `β(γ)`, d-functions, rotations,
//! - [`spectral`]: eigensystem, coalescent states, phase classification,
//! - [`pseudo`]: metric `η`, its root `ρ`, the Hermitian counterpart,
//! - [`hypercube`]: spin ensembles and their total-spin blocks,
//! - [`dynamics`]: time evolution and perfect state transfer,
//! - [`linalg`]: dense complex algebra, a Jacobi eigensolver, an RK4 oracle.
//!
//! Every routine is generic over the scalar type. The aliases below fix it
//! to `f64`; [`DoubleDouble`] gives about 32 significant digits where the
//! metric's exponentially large entries make `f64` cancellation visible.
//!
//! ```
//! use ptnet::{analytic_eigensystem, Chain};
//!
//! let sys = analytic_eigensystem(&Chain::imaginary(5, 0.6).unwrap()).unwrap();
//! assert!((sys.eigenvalues[0].re - 1.6).abs() < 1e-12);
//! assert!(sys.residuals().unwrap().iter().all(|&r| r < 1e-12));
//! ```

pub mod angular;
pub mod chain;
mod double;
pub mod dynamics;
pub mod error;
pub mod hypercube;
pub mod io;
pub mod linalg;
pub mod pseudo;
pub mod scalar;
pub mod spectral;

pub use angular::{
    beta_angle, rotation_from_angle, rotation_operator, wigner_d, wigner_d_explicit,
    wigner_d_matrix, AngularOps, MixingAngle,
};
pub use chain::{build_hamiltonian, pt_apply, ChainSpec, PotentialKind};
pub use dynamics::{
    evolve, expand_initial, norm_trace, omega_closed_form, pst_fidelity, pst_fidelity_with, tau,
    transferable_coefficients, transferable_state, EvolutionTrace, TransferReport,
};
pub use error::{Error, Result};
pub use hypercube::{
    build_spin_ensemble, coupled_basis, product_spectrum, project_blocks, CoupledBasis,
    SpinEnsemble,
};
pub use linalg::{
    hermitian_eigensystem, log_stable_sum, rk4_propagate, ComplexMatrix, HermitianEigen,
    StateVector,
};
pub use pseudo::{eta_inner_product, hermitian_counterpart, metric_operator, MetricPair};
pub use scalar::{tol, Cx, Real};
pub use spectral::{
    analytic_eigensystem, classify_phase, coalescence_distance, coalescent_state,
    dressed_eigenfunctions, BiorthogonalSystem, Branch, Phase, PhaseReport,
};

pub use double::DoubleDouble;

pub type Matrix = ComplexMatrix<f64>;
pub type State = StateVector<f64>;
pub type Chain = ChainSpec<f64>;
pub type Eigensystem = BiorthogonalSystem<f64>;
pub type Metric = MetricPair<f64>;
pub type Ensemble = SpinEnsemble<f64>;
pub type Trace = EvolutionTrace<f64>;
pub type Report = TransferReport<f64>;
