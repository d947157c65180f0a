//! Metric operator `η`, its positive square root `ρ`, the Hermitian
//! counterpart `h = ρ𝓗ρ⁻¹` and the `η`-inner product.
//!
//! With `θ' = atanh γ` the metric is `η = e^{2θ'J_y}` and `ρ = e^{θ'J_y}`.
//! Both are evaluated as rotations by imaginary angles whose half-angle
//! data come from `γ` through square roots only.

use crate::angular::{rotation_from_angle, MixingAngle};
use crate::chain::{build_hamiltonian, ChainSpec, PotentialKind};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, ComplexMatrix, StateVector};
use crate::scalar::{Cx, Real};
use crate::spectral::{analytic_eigensystem, BiorthogonalSystem};

/// `η` together with `ρ = √η` and `ρ⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair<T> {
    pub eta: ComplexMatrix<T>,
    pub rho: ComplexMatrix<T>,
    pub rho_inv: ComplexMatrix<T>,
    /// `max|η_closed − η_eigen| / max|η_closed|`.
    pub route_discrepancy: T,
}

fn require_imaginary_unbroken<T: Real>(spec: &ChainSpec<T>) -> Result<()> {
    if spec.kind != PotentialKind::Imaginary {
        return Err(Error::InvalidSpec("the metric is defined for the imaginary potential".into()));
    }
    spec.require_unbroken()
}

/// Imaginary rotation angles `(2iθ', iθ')` for `η` and `ρ`.
fn metric_angles<T: Real>(gamma: T) -> (MixingAngle<T>, MixingAngle<T>) {
    let one = T::one();
    let ch = (one - gamma * gamma).sqrt().recip();
    let x = gamma.atanh();
    let eta = MixingAngle::imaginary(x + x, ch, gamma * ch);
    let cosh_q = ((ch + one) * T::lit(0.5)).sqrt();
    let sinh_q = gamma * ch / (cosh_q + cosh_q);
    let rho = MixingAngle::imaginary(x, cosh_q, sinh_q);
    (eta, rho)
}

/// `Σ_n |φ_n⟩⟨φ_n|`, Hermitized.
pub fn metric_from_eigenstates<T: Real>(system: &BiorthogonalSystem<T>) -> ComplexMatrix<T> {
    let n = system.dim();
    ComplexMatrix::from_fn(n, n, |r, c| {
        system
            .left_vectors
            .iter()
            .fold(Cx::new(T::zero(), T::zero()), |acc, phi| acc + phi[r] * phi[c].conj())
    })
    .hermitized()
}

/// Builds `η`, `ρ`, `ρ⁻¹` in closed form and cross-checks `η` against the
/// eigenstate sum.
pub fn metric_operator<T: Real>(spec: &ChainSpec<T>) -> Result<MetricPair<T>> {
    require_imaginary_unbroken(spec)?;
    let n = spec.n_sites;
    let (eta_angle, rho_angle) = metric_angles(spec.gamma);
    let eta = rotation_from_angle(n, &eta_angle);
    let rho = rotation_from_angle(n, &rho_angle);
    let rho_inv = rotation_from_angle(n, &rho_angle.negated());
    let route_a = metric_from_eigenstates(&analytic_eigensystem(spec)?);
    let route_discrepancy = route_a.max_abs_diff(&eta) / eta.max_abs();
    Ok(MetricPair {
        eta,
        rho,
        rho_inv,
        route_discrepancy,
    })
}

/// Positive square root of a Hermitian positive-definite matrix through its
/// eigendecomposition.
pub fn metric_sqrt_by_eigen<T: Real>(eta: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigensystem(eta)?;
    if let Some(&smallest) = eig.values.first() {
        if !(smallest > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "metric is not positive definite (smallest eigenvalue {smallest})"
            )));
        }
    }
    Ok(eig.map_spectrum(|l| Cx::new(l.sqrt(), T::zero())))
}

/// `h = ρ𝓗ρ⁻¹`, which equals `√(1−γ²)·H(γ=0)`.
pub fn hermitian_counterpart<T: Real>(spec: &ChainSpec<T>) -> Result<ComplexMatrix<T>> {
    let pair = metric_operator(spec)?;
    counterpart_from(spec, &pair)
}

/// `ρ𝓗ρ⁻¹` with a precomputed metric.
pub fn counterpart_from<T: Real>(spec: &ChainSpec<T>, pair: &MetricPair<T>) -> Result<ComplexMatrix<T>> {
    let h = build_hamiltonian(spec)?;
    pair.rho.matmul(&h)?.matmul(&pair.rho_inv)
}

/// `⟨u|η|v⟩`, conjugate-linear in `u`.
pub fn eta_inner_product<T: Real>(
    u: &StateVector<T>,
    v: &StateVector<T>,
    pair: &MetricPair<T>,
) -> Result<Cx<T>> {
    eta_inner(u, v, &pair.eta)
}

pub(crate) fn eta_inner<T: Real>(u: &StateVector<T>, v: &StateVector<T>, eta: &ComplexMatrix<T>) -> Result<Cx<T>> {
    u.inner(&eta.apply(v)?)
}
