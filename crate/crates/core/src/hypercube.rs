//! Ensembles of `d` non-interacting spin-½ particles, whose `2^d` matrix is
//! a Kronecker sum of single-spin matrices (a hypercube graph at `γ = 0`),
//! and their reduction to chains of `N = 2S+1` sites in the total-spin
//! basis.
//!
//! Product states are indexed with the first spin most significant and
//! bit value 0 for spin up.

use num_traits::Zero;

use crate::linalg::nan_max;
use crate::chain::{build_hamiltonian, ChainSpec};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::{cx, re, Cx, Real};
use crate::spectral::analytic_eigensystem;

/// Largest spin count accepted.
pub const MAX_SPINS: usize = 12;

/// Projection tolerance for block equality and leakage.
const BLOCK_TOL: f64 = 1e-10;

/// `½[[iγ, 1], [1, −iγ]]`.
pub fn single_spin_matrix<T: Real>(gamma: T) -> ComplexMatrix<T> {
    let h = T::lit(0.5);
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = cx(T::zero(), gamma * h);
    m[(0, 1)] = re(h);
    m[(1, 0)] = re(h);
    m[(1, 1)] = cx(T::zero(), -gamma * h);
    m
}

/// A group of identical chain blocks with total spin `S = two_s/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBlock<T> {
    pub two_s: usize,
    pub multiplicity: usize,
    pub block: ComplexMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinEnsemble<T> {
    pub d: usize,
    pub gamma: T,
    pub matrix: ComplexMatrix<T>,
    /// In order of decreasing `S`.
    pub blocks: Vec<SpinBlock<T>>,
}

fn check_spins(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("need at least one spin".into()));
    }
    if d > MAX_SPINS {
        return Err(Error::TooLarge {
            size: d,
            max: MAX_SPINS,
        });
    }
    Ok(())
}

/// `⊕_{l=1}^{d} M_l` by iterated Kronecker sums.
pub fn spin_ensemble_matrix<T: Real>(d: usize, gamma: T) -> Result<ComplexMatrix<T>> {
    check_spins(d)?;
    if !gamma.is_finite() {
        return Err(Error::InvalidSpec(format!("gamma must be finite, got {gamma}")));
    }
    let m = single_spin_matrix(gamma);
    Ok((1..d).fold(m.clone(), |acc, _| acc.kron_sum(&m)))
}

/// Dense ensemble matrix plus its total-spin blocks.
pub fn build_spin_ensemble<T: Real>(d: usize, gamma: T) -> Result<SpinEnsemble<T>> {
    let matrix = spin_ensemble_matrix(d, gamma)?;
    let mut ensemble = SpinEnsemble {
        d,
        gamma,
        matrix,
        blocks: Vec::new(),
    };
    let projected = project_blocks(&ensemble, &coupled_basis(d)?)?;
    let mut blocks: Vec<SpinBlock<T>> = Vec::new();
    for p in projected {
        match blocks.last_mut() {
            Some(b) if b.two_s == p.two_s => b.multiplicity += 1,
            _ => blocks.push(SpinBlock {
                two_s: p.two_s,
                multiplicity: 1,
                block: p.block,
            }),
        }
    }
    ensemble.blocks = blocks;
    Ok(ensemble)
}

/// `(⊕ m) v` for a 2×2 `m` without forming the `2^d` matrix.
pub fn kron_sum_apply<T: Real>(d: usize, m: &ComplexMatrix<T>, v: &[Cx<T>]) -> Vec<Cx<T>> {
    let dim = 1usize << d;
    assert_eq!(v.len(), dim, "vector length must be 2^d");
    let mut out = vec![Cx::zero(); dim];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = Cx::zero();
        for bit_pos in 0..d {
            let mask = 1usize << bit_pos;
            let b = usize::from(i & mask != 0);
            acc = acc + m[(b, b)] * v[i] + m[(b, 1 - b)] * v[i ^ mask];
        }
        *slot = acc;
    }
    out
}

/// Number of spin-`S` multiplets among `d` spins:
/// `C(d, d/2−S) − C(d, d/2−S−1)`.
pub fn multiplicity(d: usize, two_s: usize) -> usize {
    if two_s > d || (d - two_s) % 2 != 0 {
        return 0;
    }
    let k = (d - two_s) / 2;
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    binom(d, k) - if k > 0 { binom(d, k - 1) } else { 0 }
}

/// One coupled-basis vector, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledVector<T> {
    pub two_s: usize,
    pub two_m: i64,
    /// Copy number among multiplets of equal `S` (0-based).
    pub copy: usize,
    /// Intermediate `2j` after each added spin.
    pub path: Vec<usize>,
    /// `(product-state index, amplitude)`, sorted by index.
    pub entries: Vec<(usize, T)>,
}

impl<T: Real> CoupledVector<T> {
    pub fn to_state(&self, dim: usize) -> StateVector<T> {
        let mut amps = vec![Cx::zero(); dim];
        for &(i, a) in &self.entries {
            amps[i] = re(a);
        }
        StateVector::from_vec_unchecked(amps)
    }

    fn dot(&self, w: &[Cx<T>]) -> Cx<T> {
        self.entries.iter().fold(Cx::zero(), |acc, &(i, a)| acc + w[i] * a)
    }
}

/// Total-spin eigenbasis of `d` spins, grouped by `(S, copy)` with `S`
/// decreasing and `m` decreasing inside each multiplet, so that the
/// block site index is `l = S − m + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledBasis<T> {
    pub d: usize,
    pub vectors: Vec<CoupledVector<T>>,
}

impl<T: Real> CoupledBasis<T> {
    pub fn dim(&self) -> usize {
        1 << self.d
    }

    /// Vectors of one multiplet, `m` descending.
    pub fn multiplets(&self) -> Vec<&[CoupledVector<T>]> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.vectors.len() {
            let len = self.vectors[start].two_s + 1;
            out.push(&self.vectors[start..start + len]);
            start += len;
        }
        out
    }
}

struct Multiplet<T> {
    two_j: usize,
    path: Vec<usize>,
    /// Components for `m = j, j−1, …, −j`.
    components: Vec<Vec<(usize, T)>>,
}

impl<T: Real> Multiplet<T> {
    fn component(&self, two_m: i64) -> Option<&Vec<(usize, T)>> {
        let j2 = self.two_j as i64;
        if two_m.abs() > j2 || (j2 - two_m) % 2 != 0 {
            return None;
        }
        Some(&self.components[((j2 - two_m) / 2) as usize])
    }
}

fn couple_spin<T: Real>(parent: &Multiplet<T>, up: bool) -> Option<Multiplet<T>> {
    // J = j ± ½ built from |j, M∓½⟩⊗↑ and |j, M±½⟩⊗↓
    let j2 = parent.two_j as i64;
    if !up && j2 == 0 {
        return None;
    }
    let big_j2 = if up { j2 + 1 } else { j2 - 1 };
    let denom = T::lit((2 * (j2 + 1)) as f64);
    let mut components = Vec::new();
    let mut m2 = big_j2;
    while m2 >= -big_j2 {
        let (a2, b2) = if up {
            (T::lit((j2 + m2 + 1) as f64), T::lit((j2 - m2 + 1) as f64))
        } else {
            (T::lit((j2 - m2 + 1) as f64), T::lit((j2 + m2 + 1) as f64))
        };
        let a = (a2 / denom).sqrt() * if up { T::one() } else { -T::one() };
        let b = (b2 / denom).sqrt();
        let mut entries = Vec::new();
        if let Some(v) = parent.component(m2 - 1) {
            entries.extend(v.iter().map(|&(i, x)| (2 * i, x * a)));
        }
        if let Some(v) = parent.component(m2 + 1) {
            entries.extend(v.iter().map(|&(i, x)| (2 * i + 1, x * b)));
        }
        entries.retain(|&(_, x)| !x.is_zero());
        entries.sort_by_key(|&(i, _)| i);
        components.push(entries);
        m2 -= 2;
    }
    let mut path = parent.path.clone();
    path.push(big_j2 as usize);
    Some(Multiplet {
        two_j: big_j2 as usize,
        path,
        components,
    })
}

/// Sequential Clebsch-Gordan coupling of `d` spin-½ particles.
pub fn coupled_basis<T: Real>(d: usize) -> Result<CoupledBasis<T>> {
    check_spins(d)?;
    let mut level = vec![Multiplet {
        two_j: 1,
        path: vec![1],
        components: vec![vec![(0, T::one())], vec![(1, T::one())]],
    }];
    for _ in 1..d {
        level = level
            .iter()
            .flat_map(|p| [couple_spin(p, true), couple_spin(p, false)])
            .flatten()
            .collect();
    }
    level.sort_by(|a, b| b.two_j.cmp(&a.two_j).then_with(|| a.path.cmp(&b.path)));
    let mut vectors = Vec::with_capacity(1 << d);
    let mut copy = 0;
    for (idx, mult) in level.iter().enumerate() {
        if idx > 0 && level[idx - 1].two_j == mult.two_j {
            copy += 1;
        } else {
            copy = 0;
        }
        for (k, entries) in mult.components.iter().enumerate() {
            vectors.push(CoupledVector {
                two_s: mult.two_j,
                two_m: mult.two_j as i64 - 2 * k as i64,
                copy,
                path: mult.path.clone(),
                entries: entries.clone(),
            });
        }
    }
    Ok(CoupledBasis { d, vectors })
}

/// `Vᵀ·M·V` for one multiplet, with checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedBlock<T> {
    pub two_s: usize,
    pub copy: usize,
    pub block: ComplexMatrix<T>,
    /// `max_abs` difference from the `N = 2S+1` chain matrix.
    pub deviation: T,
    /// Largest norm of `M·v` outside the multiplet's span.
    pub leakage: T,
}

/// Projects the ensemble onto each multiplet of `basis`. Fails with
/// [`Error::BlockMismatch`] if a block differs from its chain matrix or
/// couples to other multiplets.
pub fn project_blocks<T: Real>(
    ensemble: &SpinEnsemble<T>,
    basis: &CoupledBasis<T>,
) -> Result<Vec<ProjectedBlock<T>>> {
    if basis.d != ensemble.d {
        return Err(Error::DimensionMismatch {
            expected: ensemble.d,
            found: basis.d,
        });
    }
    let single = single_spin_matrix(ensemble.gamma);
    let dim = basis.dim();
    let tol = T::lit(BLOCK_TOL);
    let mut out = Vec::new();
    for mult in basis.multiplets() {
        let n = mult.len();
        let images: Vec<Vec<Cx<T>>> = mult
            .iter()
            .map(|v| kron_sum_apply(ensemble.d, &single, v.to_state(dim).amplitudes()))
            .collect();
        let block = ComplexMatrix::from_fn(n, n, |r, c| mult[r].dot(&images[c]));
        let mut leakage = T::zero();
        for (c, w) in images.iter().enumerate() {
            let mut rest = w.clone();
            for (r, v) in mult.iter().enumerate() {
                for &(i, a) in &v.entries {
                    rest[i] = rest[i] - block[(r, c)] * a;
                }
            }
            let norm = rest.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
            leakage = nan_max(leakage, norm);
        }
        let chain = build_hamiltonian(&ChainSpec::imaginary(n, ensemble.gamma)?)?;
        let deviation = block.max_abs_diff(&chain);
        let (two_s, copy) = (mult[0].two_s, mult[0].copy);
        if deviation > tol || leakage > tol {
            return Err(Error::BlockMismatch {
                two_s,
                copy,
                deviation: nan_max(deviation, leakage).as_f64(),
            });
        }
        out.push(ProjectedBlock {
            two_s,
            copy,
            block,
            deviation,
            leakage,
        });
    }
    Ok(out)
}

/// Eigenpairs of the ensemble built as tensor products of single-spin
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpectrum<T> {
    /// Indexed like product states: bit 0 selects the upper single-spin level.
    pub eigenvalues: Vec<Cx<T>>,
    /// Largest `‖M·v − λv‖/‖v‖`.
    pub max_residual: T,
}

/// Requires the unbroken region `|γ| < 1`.
pub fn product_spectrum<T: Real>(ensemble: &SpinEnsemble<T>) -> Result<ProductSpectrum<T>> {
    let single = analytic_eigensystem(&ChainSpec::imaginary(2, ensemble.gamma)?)?;
    let d = ensemble.d;
    let dim = 1usize << d;
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut max_residual = T::zero();
    for pattern in 0..dim {
        let bits: Vec<usize> = (0..d).map(|p| (pattern >> (d - 1 - p)) & 1).collect();
        let lambda = bits.iter().fold(Cx::zero(), |acc, &b| acc + single.eigenvalues[b]);
        let amps: Vec<Cx<T>> = (0..dim)
            .map(|i| {
                (0..d).fold(Cx::new(T::one(), T::zero()), |acc, p| {
                    let site = (i >> (d - 1 - p)) & 1;
                    acc * single.right_vectors[bits[p]][site]
                })
            })
            .collect();
        let v = StateVector::from_vec_unchecked(amps);
        let mv = ensemble.matrix.apply(&v)?;
        let r = mv.axpy(-lambda, &v)?.norm() / v.norm();
        max_residual = nan_max(max_residual, r);
        eigenvalues.push(lambda);
    }
    Ok(ProductSpectrum {
        eigenvalues,
        max_residual,
    })
}

/// Total-spin operators `(S_x, S_y, S_z)` on `d` spins as dense matrices.
pub fn total_spin_operators<T: Real>(d: usize) -> Result<[ComplexMatrix<T>; 3]> {
    check_spins(d)?;
    let h = T::lit(0.5);
    let sx = ComplexMatrix::from_real(2, 2, |r, c| if r != c { h } else { T::zero() });
    let mut sy = ComplexMatrix::zeros(2, 2);
    sy[(0, 1)] = cx(T::zero(), -h);
    sy[(1, 0)] = cx(T::zero(), h);
    let sz = ComplexMatrix::from_real(2, 2, |r, c| match (r, c) {
        (0, 0) => h,
        (1, 1) => -h,
        _ => T::zero(),
    });
    let total = |s: &ComplexMatrix<T>| (1..d).fold(s.clone(), |acc, _| acc.kron_sum(s));
    Ok([total(&sx), total(&sy), total(&sz)])
}

/// `S² = S_x² + S_y² + S_z²`.
pub fn total_spin_squared<T: Real>(d: usize) -> Result<ComplexMatrix<T>> {
    let [sx, sy, sz] = total_spin_operators::<T>(d)?;
    Ok(&(&(&sx * &sx) + &(&sy * &sy)) + &(&sz * &sz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigensystem;

    #[test]
    fn single_spin_ensemble() {
        let e = spin_ensemble_matrix(1, 0.6).unwrap();
        assert_eq!(e[(0, 0)], cx(0.0, 0.3));
        assert_eq!(e[(0, 1)], cx(0.5, 0.0));
        assert_eq!(e[(1, 1)], cx(0.0, -0.3));
        assert!(matches!(spin_ensemble_matrix(13, 0.1), Err(Error::TooLarge { .. })));
        assert!(spin_ensemble_matrix(0, 0.1).is_err());
    }

    #[test]
    fn zero_gamma_is_half_the_hypercube_adjacency() {
        for d in 1..=6 {
            let m = spin_ensemble_matrix(d, 0.0).unwrap();
            let n: usize = 1 << d;
            for r in 0..n {
                for c in 0..n {
                    let adjacent = (r ^ c).count_ones() == 1;
                    assert_eq!(m[(r, c)], cx(if adjacent { 0.5 } else { 0.0 }, 0.0));
                }
                let degree: f64 = (0..n).map(|c| 2.0 * m[(r, c)].re).sum();
                assert_eq!(degree, d as f64);
            }
        }
    }

    #[test]
    fn fast_apply_matches_dense() {
        let m = single_spin_matrix(0.37);
        for d in 1..=6 {
            let dense = spin_ensemble_matrix(d, 0.37).unwrap();
            let v: Vec<Cx<f64>> = (0..1 << d).map(|i| cx((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
            let fast = kron_sum_apply(d, &m, &v);
            let slow = dense.apply(&StateVector::new(v).unwrap()).unwrap();
            let diff = fast.iter().zip(slow.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-14);
        }
    }

    #[test]
    fn two_spin_coupling() {
        let basis = coupled_basis::<f64>(2).unwrap();
        let dense: Vec<Vec<f64>> = basis
            .vectors
            .iter()
            .map(|v| v.to_state(4).amplitudes().iter().map(|z| z.re).collect())
            .collect();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(dense[0], vec![1.0, 0.0, 0.0, 0.0]);
        assert!((dense[1][1] - h).abs() < 1e-15 && (dense[1][2] - h).abs() < 1e-15);
        assert_eq!(dense[2], vec![0.0, 0.0, 0.0, 1.0]);
        assert!((dense[3][1] - h).abs() < 1e-15 && (dense[3][2] + h).abs() < 1e-15);
        assert_eq!(basis.vectors[3].two_s, 0);
    }

    #[test]
    fn multiplicities() {
        assert_eq!((multiplicity(4, 4), multiplicity(4, 2), multiplicity(4, 0)), (1, 3, 2));
        assert_eq!(multiplicity(4, 3), 0);
        for d in 1..=10 {
            let basis = coupled_basis::<f64>(d).unwrap();
            for two_s in 0..=d {
                let count = basis.multiplets().iter().filter(|m| m[0].two_s == two_s).count();
                assert_eq!(count, multiplicity(d, two_s), "d={d} 2S={two_s}");
            }
            let total: usize = (0..=d).map(|s| multiplicity(d, s) * (s + 1)).sum();
            assert_eq!(total, 1 << d);
        }
    }

    #[test]
    fn basis_is_orthonormal_and_labelled() {
        for d in 1..=7 {
            let basis = coupled_basis::<f64>(d).unwrap();
            let n = basis.dim();
            let v = ComplexMatrix::from_columns(
                &basis.vectors.iter().map(|v| v.to_state(n)).collect::<Vec<_>>(),
            )
            .unwrap();
            let gram = v.adjoint().matmul(&v).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12, "d={d}");
            let s2 = total_spin_squared::<f64>(d).unwrap();
            let sz = &total_spin_operators::<f64>(d).unwrap()[2];
            for cv in &basis.vectors {
                let state = cv.to_state(n);
                let s = cv.two_s as f64 / 2.0;
                let r = s2.apply(&state).unwrap().axpy(cx(-s * (s + 1.0), 0.0), &state).unwrap();
                assert!(r.norm() < 1e-12);
                let m = cv.two_m as f64 / 2.0;
                let r = sz.apply(&state).unwrap().axpy(cx(-m, 0.0), &state).unwrap();
                assert!(r.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn total_spin_spectrum_by_jacobi() {
        let d = 4;
        let vals = hermitian_eigensystem(&total_spin_squared::<f64>(d).unwrap()).unwrap().values;
        let mut expected = Vec::new();
        for two_s in (0..=d).rev() {
            let s = two_s as f64 / 2.0;
            for _ in 0..multiplicity(d, two_s) * (two_s + 1) {
                expected.push(s * (s + 1.0));
            }
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in vals.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn total_spin_is_conserved() {
        for d in 1..=8 {
            let m = spin_ensemble_matrix(d, 0.7).unwrap();
            let s2 = total_spin_squared::<f64>(d).unwrap();
            let c = ComplexMatrix::commutator(&s2, &m).unwrap();
            assert!(c.max_abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn two_spin_blocks() {
        let e = build_spin_ensemble(2, 0.6).unwrap();
        assert_eq!(e.blocks.len(), 2);
        let chain = build_hamiltonian(&ChainSpec::imaginary(3, 0.6).unwrap()).unwrap();
        assert!(e.blocks[0].block.max_abs_diff(&chain) < 1e-12);
        assert_eq!(e.blocks[1].two_s, 0);
        assert!(e.blocks[1].block[(0, 0)].norm() < 1e-15);
        let spec = product_spectrum(&e).unwrap();
        let mut vals: Vec<f64> = spec.eigenvalues.iter().map(|z| z.re).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let expected = [0.8, 0.0, 0.0, -0.8];
        assert!(vals.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn broken_basis_is_reported() {
        let e = build_spin_ensemble(3, 0.2).unwrap();
        let mut basis = coupled_basis::<f64>(3).unwrap();
        basis.vectors.swap(0, 1);
        assert!(matches!(project_blocks(&e, &basis), Err(Error::BlockMismatch { .. })));
    }

    #[test]
    fn spectra_union_up_to_eight_spins() {
        for d in 1..=8 {
            let g = 0.45;
            let e = build_spin_ensemble(d, g).unwrap();
            let prod = product_spectrum(&e).unwrap();
            assert!(prod.max_residual < 1e-10, "d={d}");
            let mut from_blocks: Vec<f64> = Vec::new();
            for b in &e.blocks {
                let sys = analytic_eigensystem(&ChainSpec::imaginary(b.two_s + 1, g).unwrap()).unwrap();
                for _ in 0..b.multiplicity {
                    from_blocks.extend(sys.eigenvalues.iter().map(|z| z.re));
                }
            }
            let mut ens: Vec<f64> = prod.eigenvalues.iter().map(|z| z.re).collect();
            assert!(prod.eigenvalues.iter().all(|z| z.im.abs() < 1e-12));
            ens.sort_by(|a, b| a.partial_cmp(b).unwrap());
            from_blocks.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(ens.len(), from_blocks.len());
            assert!(ens.iter().zip(&from_blocks).all(|(a, b)| (a - b).abs() < 1e-10), "d={d}");
        }
    }
}
