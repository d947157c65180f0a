use num_traits::Zero;

use super::{nan_max, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cx, re, tol, Cx, Real};

/// Largest dimension accepted by [`hermitian_eigensystem`].
pub const MAX_EIGEN_DIM: usize = 4096;

/// Spectral decomposition `m = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V·diag(f(λ))·V†`, i.e. the matrix function `f(m)`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Cx<T>) -> ComplexMatrix<T> {
        let n = self.values.len();
        let weights: Vec<Cx<T>> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).fold(Cx::zero(), |acc, k| acc + v[(r, k)] * weights[k] * v[(c, k)].conj())
        })
    }

    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(re)
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Converges when the largest off-diagonal modulus drops below
/// `1e-12·‖m‖_max`; gives up with [`Error::NoConvergence`] after 100 sweeps.
pub fn hermitian_eigensystem<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_EIGEN_DIM {
        return Err(Error::TooLarge {
            size: n,
            max: MAX_EIGEN_DIM,
        });
    }
    let scale = m.max_abs();
    let defect = m.hermiticity_defect();
    if defect > T::lit(tol::HERMITIAN) * scale.max(T::one()) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }

    let mut a = m.hermitized();
    let mut v = ComplexMatrix::<T>::identity(n);
    let threshold = T::lit(tol::JACOBI_OFFDIAG) * scale;
    let negligible = threshold * T::lit(1e-3);

    let mut converged = false;
    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[(p, q)];
                let mag = z.norm();
                if mag <= negligible {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, mag, z / mag);
            }
        }
    }
    if !converged && max_off_diagonal(&a) > threshold {
        return Err(Error::NoConvergence(tol::JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn max_off_diagonal<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut worst = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            worst = worst.max(a[(p, q)].norm());
        }
    }
    worst
}

/// Applies `a ← U†·a·U`, `v ← v·U` for the unitary that zeroes `a[p][q]`.
fn rotate<T: Real>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    mag: T,
    phase: Cx<T>,
) {
    let n = a.rows();
    let two = T::lit(2.0);
    let zeta = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
    let t = {
        let sign = if zeta < T::zero() { -T::one() } else { T::one() };
        sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
    };
    let c = (T::one() + t * t).sqrt().recip();
    let s = t * c;
    let back = phase.conj();
    let (u_pp, u_pq, u_qp, u_qq) = (re(c), re(s), back * (-s), back * c);

    let rotate_columns = |mat: &mut ComplexMatrix<T>| {
        for k in 0..n {
            let (kp, kq) = (mat[(k, p)], mat[(k, q)]);
            mat[(k, p)] = kp * u_pp + kq * u_qp;
            mat[(k, q)] = kp * u_pq + kq * u_qq;
        }
    };
    rotate_columns(a);
    rotate_columns(v);
    for k in 0..n {
        let (pk, qk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u_pp.conj() * pk + u_qp.conj() * qk;
        a[(q, k)] = u_pq.conj() * pk + u_qq.conj() * qk;
    }
    a[(p, q)] = Cx::zero();
    a[(q, p)] = Cx::zero();
    a[(p, p)] = cx(a[(p, p)].re, T::zero());
    a[(q, q)] = cx(a[(q, q)].re, T::zero());
}

/// Largest residual `‖m·v − λv‖` over all eigenpairs, and the largest
/// deviation of `V†V` from the identity.
pub fn eigen_defects<T: Real>(m: &ComplexMatrix<T>, eig: &HermitianEigen<T>) -> (T, T) {
    let n = m.rows();
    let mut residual = T::zero();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let col = eig.vectors.column(k);
        let mv = m.apply(&col).expect("square");
        let r = mv.axpy(re(-lambda), &col).expect("same dim").norm();
        residual = nan_max(residual, r);
    }
    let gram = eig.vectors.adjoint().matmul(&eig.vectors).expect("square");
    let ortho = gram.max_abs_diff(&ComplexMatrix::identity(n));
    (residual, ortho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = ComplexMatrix<f64>;

    fn values(m: &M) -> Vec<f64> {
        hermitian_eigensystem(m).unwrap().values
    }

    #[test]
    fn identity_has_unit_spectrum() {
        assert_eq!(values(&M::identity(3)), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_level_examples() {
        // characteristic polynomial (1.25 − λ)² − 0.5625 = 0  →  λ = 0.5, 2
        let m = M::new(
            2,
            2,
            vec![cx(1.25, 0.0), cx(0.0, -0.75), cx(0.0, 0.75), cx(1.25, 0.0)],
        )
        .unwrap();
        let v = values(&m);
        assert!((v[0] - 0.5).abs() < 1e-14 && (v[1] - 2.0).abs() < 1e-14, "{v:?}");

        let sy = M::new(2, 2, vec![cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)])
            .unwrap();
        let v = values(&sy);
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = M::new(2, 2, vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)])
            .unwrap();
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(
            hermitian_eigensystem(&M::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let e = hermitian_eigensystem(&M::zeros(4, 4)).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
    }

    fn hermitian(n: usize, entries: &[(f64, f64)]) -> M {
        let mut m = M::zeros(n, n);
        let mut it = entries.iter().cycle();
        for r in 0..n {
            for c in r..n {
                let &(x, y) = it.next().unwrap();
                if r == c {
                    m[(r, c)] = cx(x, 0.0);
                } else {
                    m[(r, c)] = cx(x, y);
                    m[(c, r)] = cx(x, -y);
                }
            }
        }
        m
    }

    proptest! {
        #[test]
        fn reconstruction_and_orthonormality(
            n in 1usize..9,
            entries in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 45),
        ) {
            let m = hermitian(n, &entries);
            let eig = hermitian_eigensystem(&m).unwrap();
            let scale = m.max_abs().max(1e-300);
            prop_assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-9 * scale);
            let (residual, ortho) = eigen_defects(&m, &eig);
            prop_assert!(residual <= 1e-10 * scale);
            prop_assert!(ortho <= 1e-12);
            prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
