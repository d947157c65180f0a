//! Engineered tight-binding chains with linear on-site potentials.
//!
//! Sites are numbered `1..=N` in every public signature. The chain has
//! couplings `√(l(N−l))/2` between sites `l` and `l+1`, and on-site energy
//! `c·γ·((N+1)/2 − l)` with `c = 1` for a real potential and `c = i` for the
//! PT-symmetric imaginary one.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::{cx, re, Cx, Real};

/// Whether the linear potential is real (Hermitian chain) or imaginary
/// (PT-symmetric chain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    Real,
    Imaginary,
}

/// Model parameters: site count `N`, potential strength `γ` and its kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec<T> {
    pub n_sites: usize,
    pub gamma: T,
    pub kind: PotentialKind,
}

impl<T: Real> ChainSpec<T> {
    pub fn new(n_sites: usize, gamma: T, kind: PotentialKind) -> Result<Self> {
        let spec = Self { n_sites, gamma, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn imaginary(n_sites: usize, gamma: T) -> Result<Self> {
        Self::new(n_sites, gamma, PotentialKind::Imaginary)
    }

    pub fn real(n_sites: usize, gamma: T) -> Result<Self> {
        Self::new(n_sites, gamma, PotentialKind::Real)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 1 {
            return Err(Error::InvalidSpec("a chain needs at least one site".into()));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidSpec(format!("gamma must be finite, got {}", self.gamma)));
        }
        Ok(())
    }

    /// Imaginary potential sitting exactly on an exceptional point `|γ| = 1`.
    pub fn is_critical(&self) -> bool {
        self.kind == PotentialKind::Imaginary && self.gamma.abs() == T::one()
    }

    /// Imaginary potential past the exceptional point.
    pub fn is_broken(&self) -> bool {
        self.kind == PotentialKind::Imaginary && self.gamma.abs() > T::one()
    }

    /// Fails with [`Error::EpSingular`] or [`Error::BrokenPhase`] unless the
    /// spectrum is real and diagonalizable.
    pub fn require_unbroken(&self) -> Result<()> {
        self.validate()?;
        if self.is_critical() {
            return Err(Error::EpSingular);
        }
        if self.is_broken() {
            return Err(Error::BrokenPhase(self.gamma.abs().as_f64()));
        }
        Ok(())
    }

    /// Same chain with the potential switched off.
    pub fn hermitian_limit(&self) -> Self {
        Self { gamma: T::zero(), ..*self }
    }

    /// `(N+1)/2 − l` for a 1-based site (or level) index.
    pub fn offset(&self, l: usize) -> T {
        T::count(self.n_sites + 1) * T::lit(0.5) - T::count(l)
    }
}

/// Hopping amplitude between sites `l` and `l+1` (1-based).
pub fn coupling<T: Real>(n_sites: usize, l: usize) -> T {
    (T::count(l * (n_sites - l))).sqrt() * T::lit(0.5)
}

/// Single-particle matrix of the chain in the site basis.
pub fn build_hamiltonian<T: Real>(spec: &ChainSpec<T>) -> Result<ComplexMatrix<T>> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = ComplexMatrix::zeros(n, n);
    for l in 1..n {
        let t = re(coupling::<T>(n, l));
        h[(l - 1, l)] = t;
        h[(l, l - 1)] = t;
    }
    for l in 1..=n {
        let v = spec.gamma * spec.offset(l);
        h[(l - 1, l - 1)] = match spec.kind {
            PotentialKind::Real => re(v),
            PotentialKind::Imaginary => cx(T::zero(), v),
        };
    }
    Ok(h)
}

/// Parity (`l → N+1−l`), optionally followed by complex conjugation (time
/// reversal), giving the PT operation.
pub fn pt_apply<T: Real>(state: &StateVector<T>, include_time_reversal: bool) -> StateVector<T> {
    let reversed = state.reversed();
    if include_time_reversal {
        reversed.conj()
    } else {
        reversed
    }
}

/// `‖PT(h·v) − h·PT(v)‖` for a given probe vector.
pub fn pt_commutator_defect<T: Real>(h: &ComplexMatrix<T>, v: &StateVector<T>) -> Result<T> {
    let lhs = pt_apply(&h.apply(v)?, true);
    let rhs = h.apply(&pt_apply(v, true))?;
    let diff = lhs.axpy(Cx::new(-T::one(), T::zero()), &rhs)?;
    Ok(diff.norm())
}
