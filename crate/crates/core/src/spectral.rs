//! Closed-form biorthogonal eigensystem, exceptional-point objects and
//! phase classification.
//!
//! Right eigenvectors are `ψ_n(l) = d_{n,l}(β)`, left eigenvectors are
//! their complex conjugates, and `⟨φ_m|ψ_n⟩ = Σ_l ψ_m(l)·ψ_n(l)`.

use num_traits::{One, Zero};

use crate::linalg::nan_max;
use crate::angular::{beta_angle, wigner_d_matrix, MixingAngle};
use crate::chain::{build_hamiltonian, pt_apply, ChainSpec, PotentialKind};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::{cx, re, Cx, Real};

/// Paired right/left eigenvectors with their eigenvalues, indexed
/// `n = 1..=N` (stored 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalSystem<T> {
    pub spec: ChainSpec<T>,
    pub angle: MixingAngle<T>,
    pub eigenvalues: Vec<Cx<T>>,
    pub right_vectors: Vec<StateVector<T>>,
    pub left_vectors: Vec<StateVector<T>>,
    /// `σ` in `PT ψ_n = σ·(−1)^n·ψ_n`, when the relation holds with one
    /// sign for every `n` (imaginary potential only).
    pub pt_sign: Option<i8>,
}

impl<T: Real> BiorthogonalSystem<T> {
    pub fn dim(&self) -> usize {
        self.spec.n_sites
    }

    /// `‖𝓗ψ_n − ε_nψ_n‖ / ‖ψ_n‖` for each level.
    pub fn residuals(&self) -> Result<Vec<T>> {
        let h = build_hamiltonian(&self.spec)?;
        self.right_vectors
            .iter()
            .zip(&self.eigenvalues)
            .map(|(psi, &eps)| {
                let r = h.apply(psi)?.axpy(-eps, psi)?;
                Ok(r.norm() / psi.norm())
            })
            .collect()
    }

    /// `[⟨φ_m|ψ_n⟩]_{m,n}`.
    pub fn gram(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |m, k| {
            self.left_vectors[m].inner(&self.right_vectors[k]).expect("equal dims")
        })
    }

    /// Right eigenvectors as matrix columns.
    pub fn right_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_columns(&self.right_vectors).expect("equal dims")
    }

    /// Uniform gap `ε_n − ε_{n+1}`.
    pub fn spacing(&self) -> T {
        level_scale(&self.spec)
    }
}

/// `√(1−γ²)` for the imaginary potential, `√(1+γ²)` for the real one.
pub fn level_scale<T: Real>(spec: &ChainSpec<T>) -> T {
    let g2 = spec.gamma * spec.gamma;
    match spec.kind {
        PotentialKind::Imaginary => (T::one() - g2).sqrt(),
        PotentialKind::Real => (T::one() + g2).sqrt(),
    }
}

/// Eigenvalues, eigenvectors and left eigenvectors in closed form.
pub fn analytic_eigensystem<T: Real>(spec: &ChainSpec<T>) -> Result<BiorthogonalSystem<T>> {
    spec.require_unbroken()?;
    let n = spec.n_sites;
    let angle = beta_angle(spec.gamma, spec.kind)?;
    let scale = level_scale(spec);
    let eigenvalues = (1..=n).map(|k| re(scale * spec.offset(k))).collect();
    let table = wigner_d_matrix(n, &angle);
    let right_vectors: Vec<_> = (0..n).map(|k| table.row(k)).collect();
    let left_vectors = right_vectors.iter().map(StateVector::conj).collect();
    let pt_sign = match spec.kind {
        PotentialKind::Imaginary => measure_pt_sign(&right_vectors),
        PotentialKind::Real => None,
    };
    Ok(BiorthogonalSystem {
        spec: *spec,
        angle,
        eigenvalues,
        right_vectors,
        left_vectors,
        pt_sign,
    })
}

fn measure_pt_sign<T: Real>(vectors: &[StateVector<T>]) -> Option<i8> {
    let tol = T::lit(1e-6);
    let mut sign = None;
    for (idx, psi) in vectors.iter().enumerate() {
        let image = pt_apply(psi, true);
        let ratio = psi.inner(&image).ok()? / psi.norm_sqr();
        let s = if (ratio - Cx::one()).norm() < tol {
            1i8
        } else if (ratio + Cx::one()).norm() < tol {
            -1
        } else {
            return None;
        };
        // level n = idx + 1
        let sigma = if (idx + 1) % 2 == 0 { s } else { -s };
        match sign {
            None => sign = Some(sigma),
            Some(prev) if prev != sigma => return None,
            _ => {}
        }
    }
    sign
}

/// Which of the two exceptional points `γ = ±1` a coalescent state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// `√C(m, k)` by a running product.
pub(crate) fn sqrt_binomial<T: Real>(m: usize, k: usize) -> T {
    let k = k.min(m - k);
    (0..k)
        .fold(T::one(), |acc, i| acc * T::count(m - i) / T::count(i + 1))
        .sqrt()
}

fn i_power<T: Real>(branch: Branch, e: i64) -> Cx<T> {
    let base = match e.rem_euclid(4) {
        0 => cx(T::one(), T::zero()),
        1 => cx(T::zero(), T::one()),
        2 => cx(-T::one(), T::zero()),
        _ => cx(T::zero(), -T::one()),
    };
    match branch {
        Branch::Plus => base,
        Branch::Minus => base.conj(),
    }
}

/// Zero-norm state `φ_±(l) = 2^{(1−N)/2}·√C(N−1,l−1)·(±i)^{N−l}`
/// annihilated by the chain at `γ = ±1`.
pub fn coalescent_state<T: Real>(n_sites: usize, branch: Branch) -> StateVector<T> {
    coalescent_state_with_reference(n_sites, branch, n_sites)
}

/// As [`coalescent_state`] with phase `(±i)^{n−l}` for a reference level `n`.
pub fn coalescent_state_with_reference<T: Real>(
    n_sites: usize,
    branch: Branch,
    reference: usize,
) -> StateVector<T> {
    let norm = T::lit(2.0).powf(T::lit((1.0 - n_sites as f64) / 2.0));
    let amps = (1..=n_sites)
        .map(|l| {
            i_power::<T>(branch, reference as i64 - l as i64)
                * (norm * sqrt_binomial::<T>(n_sites - 1, l - 1))
        })
        .collect();
    StateVector::from_vec_unchecked(amps)
}

/// `g_n = (√2·cos(β/2))^{1−N}·C(N−1,n−1)^{−1/2}`.
pub fn dressing_factor<T: Real>(spec: &ChainSpec<T>, angle: &MixingAngle<T>, n: usize) -> Cx<T> {
    let big = spec.n_sites;
    let base = angle.cos_half * T::SQRT_2();
    let pow = (1..big).fold(Cx::<T>::one(), |acc, _| acc * base);
    pow.inv() / sqrt_binomial::<T>(big - 1, n - 1)
}

/// `ψ̃_n = g_n·ψ_n`, which all tend to `φ₊` as `γ → 1⁻`.
pub fn dressed_eigenfunctions<T: Real>(spec: &ChainSpec<T>) -> Result<Vec<StateVector<T>>> {
    if spec.kind != PotentialKind::Imaginary {
        return Err(Error::InvalidSpec("dressed eigenfunctions need an imaginary potential".into()));
    }
    let sys = analytic_eigensystem(spec)?;
    Ok(sys
        .right_vectors
        .iter()
        .enumerate()
        .map(|(k, psi)| psi.scale(dressing_factor(spec, &sys.angle, k + 1)))
        .collect())
}

/// Distance of the dressed eigenfunctions from `φ₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoalescenceDistance<T> {
    /// `max_n max_l |ψ̃_n(l) − φ₊(l)|`.
    pub literal: T,
    /// Same, after rotating each `ψ̃_n` by the global phase that best aligns
    /// it with `φ₊`.
    pub phase_aligned: T,
}

pub fn coalescence_distance<T: Real>(spec: &ChainSpec<T>) -> Result<CoalescenceDistance<T>> {
    let target = coalescent_state::<T>(spec.n_sites, Branch::Plus);
    let mut literal = T::zero();
    let mut aligned = T::zero();
    for psi in dressed_eigenfunctions(spec)? {
        literal = nan_max(literal, psi.max_abs_diff(&target)?);
        let overlap = psi.inner(&target)?;
        let phase = if overlap.norm().is_zero() { Cx::one() } else { overlap / overlap.norm() };
        aligned = nan_max(aligned, psi.scale(phase).max_abs_diff(&target)?);
    }
    Ok(CoalescenceDistance {
        literal,
        phase_aligned: aligned,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Unbroken,
    Critical,
    Broken,
}

/// Phase of an imaginary-potential chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport<T> {
    pub phase: Phase,
    /// Fraction of strictly complex eigenvalues. For odd `N` in the broken
    /// phase the middle level stays at zero, giving `(N−1)/N`.
    pub degree: T,
    /// Degree counting the whole broken spectrum as complex (1 when broken).
    pub idealized_degree: T,
    pub eigenvalues: Vec<Cx<T>>,
}

pub fn classify_phase<T: Real>(spec: &ChainSpec<T>) -> Result<PhaseReport<T>> {
    spec.validate()?;
    if spec.kind != PotentialKind::Imaginary {
        return Err(Error::InvalidSpec("phase classification needs an imaginary potential".into()));
    }
    let n = spec.n_sites;
    let g2 = spec.gamma * spec.gamma;
    let (phase, eigenvalues): (Phase, Vec<Cx<T>>) = if spec.is_critical() {
        (Phase::Critical, vec![Cx::zero(); n])
    } else if spec.is_broken() {
        let w = (g2 - T::one()).sqrt();
        (
            Phase::Broken,
            (1..=n).map(|k| cx(T::zero(), w * spec.offset(k))).collect(),
        )
    } else {
        let w = (T::one() - g2).sqrt();
        (Phase::Unbroken, (1..=n).map(|k| re(w * spec.offset(k))).collect())
    };
    let complex = eigenvalues.iter().filter(|z| !z.im.is_zero()).count();
    let degree = T::count(complex) / T::count(n);
    let idealized_degree = if phase == Phase::Broken { T::one() } else { T::zero() };
    Ok(PhaseReport {
        phase,
        degree,
        idealized_degree,
        eigenvalues,
    })
}
