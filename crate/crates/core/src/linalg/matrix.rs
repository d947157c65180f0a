use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use super::StateVector;
use crate::error::{Error, Result};
use crate::scalar::{is_finite, re, Cx, Real};

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Checked constructor: entry count must match and every entry be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if !data.iter().all(is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Cx::one() } else { Cx::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[Cx<T>]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| if r == c { values[r] } else { Cx::zero() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[StateVector<T>]) -> Result<Self> {
        let rows = columns.first().map_or(0, StateVector::dim);
        if let Some(bad) = columns.iter().find(|v| v.dim() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: bad.dim(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn column(&self, c: usize) -> StateVector<T> {
        StateVector::from_vec_unchecked((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn row(&self, r: usize) -> StateVector<T> {
        StateVector::from_vec_unchecked(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, k: Cx<T>) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.map(|z| z * k)
    }

    /// Largest entry modulus, `‖m‖_max`.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| nan_max(acc, z.norm()))
    }

    /// `‖self − other‖_max`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| nan_max(acc, (*a - *b).norm()))
    }

    /// `‖m − m†‖_max`.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†)/2`.
    pub fn hermitized(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)].conj()) * half)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * *b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let out = (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v.amplitudes())
                    .fold(Cx::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect();
        Ok(StateVector::from_vec_unchecked(out))
    }

    /// Kronecker (tensor) product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self[(r / rhs.rows, c / rhs.cols)] * rhs[(r % rhs.rows, c % rhs.cols)]
        })
    }

    /// Kronecker sum `self ⊗ I + I ⊗ rhs` of two square matrices.
    pub fn kron_sum(&self, rhs: &Self) -> Self {
        assert!(self.is_square() && rhs.is_square(), "Kronecker sum needs square factors");
        self.kron(&Self::identity(rhs.rows)) + Self::identity(self.rows).kron(rhs)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        Ok(a.matmul(b)? - b.matmul(a)?)
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).fold(Cx::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn from_real(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        Self::from_fn(rows, cols, |r, c| re(f(r, c)))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Cx<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[r * self.cols + c]
    }
}

fn zip_with<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>,
) -> ComplexMatrix<T> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "shape mismatch");
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f(*x, *y)).collect(),
    }
}

impl<T: Real> Add for ComplexMatrix<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        zip_with(&self, &rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for ComplexMatrix<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        zip_with(&self, &rhs, |x, y| x - y)
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

/// Matrix product; panics on inner-dimension mismatch. Use
/// [`ComplexMatrix::matmul`] for the fallible form.
impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("inner dimensions agree")
    }
}

/// `max` that propagates NaN instead of discarding it.
pub(crate) fn nan_max<T: Real>(a: T, b: T) -> T {
    if a.is_nan() || b.is_nan() {
        T::nan()
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type M = ComplexMatrix<f64>;

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(matches!(
            M::new(2, 2, vec![Cx::zero(); 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        assert_eq!(
            M::new(1, 1, vec![cx(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn kron_sum_of_pauli_x_is_square_adjacency() {
        let x = M::from_real(2, 2, |r, c| if r != c { 1.0 } else { 0.0 });
        let q2 = x.kron_sum(&x);
        // 4-cycle 00-01-11-10
        let expected = [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(q2[(r, c)].re, expected[r][c] as f64);
            }
        }
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = M::from_fn(2, 3, |r, c| cx(r as f64, c as f64));
        let b = a.adjoint();
        let p = a.matmul(&b).unwrap();
        assert_eq!(p.rows(), 2);
        assert!(p.hermiticity_defect() < 1e-15);
        assert!(a.matmul(&a).is_err());
    }
}
