use std::ops::Index;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Cx, Real};

/// Amplitudes of a single-particle state in the site basis.
///
/// Storage is 0-based; [`StateVector::site`] and [`StateVector::site_amplitude`]
/// take 1-based site numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Cx<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Cx<T>>) -> Result<Self> {
        if !amplitudes.iter().all(is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<Cx<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec_unchecked(vec![Cx::zero(); dim])
    }

    /// Bare site state `a_site† |0⟩`, 1-based.
    pub fn site(dim: usize, site: usize) -> Result<Self> {
        if site == 0 || site > dim {
            return Err(Error::IndexOutOfRange { index: site, max: dim });
        }
        let mut v = Self::zeros(dim);
        v.amplitudes[site - 1] = Cx::one();
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Cx<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Cx<T>> {
        self.amplitudes
    }

    pub fn site_amplitude(&self, site: usize) -> Cx<T> {
        self.amplitudes[site - 1]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Dirac inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Cx<T>> {
        self.check_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Cx::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// Unconjugated bilinear form `Σ self(l)·other(l)`.
    pub fn bilinear(&self, other: &Self) -> Result<Cx<T>> {
        self.check_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Cx::zero(), |acc, (a, b)| acc + *a * *b))
    }

    /// `Σ |amplitude|²`.
    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Unit Dirac norm; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n.is_zero() {
            return self.clone();
        }
        self.scale_real(n.recip())
    }

    pub fn scale(&self, k: Cx<T>) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().map(|z| *z * k).collect())
    }

    pub fn scale_real(&self, k: T) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().map(|z| *z * k).collect())
    }

    /// `self + k·other`.
    pub fn axpy(&self, k: Cx<T>, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_vec_unchecked(
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| *a + k * *b)
                .collect(),
        ))
    }

    /// Site reversal `l → N+1−l`.
    pub fn reversed(&self) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().rev().copied().collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().map(|z| z.conj()).collect())
    }

    /// Largest amplitude modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |acc, (a, b)| super::nan_max(acc, (*a - *b).norm())))
    }

    /// Converts between scalar types (e.g. extended precision → f64).
    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector::from_vec_unchecked(
            self.amplitudes
                .iter()
                .map(|z| Cx::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        )
    }
}

impl<T> Index<usize> for StateVector<T> {
    type Output = Cx<T>;

    fn index(&self, i: usize) -> &Cx<T> {
        &self.amplitudes[i]
    }
}
