//! Spectral time evolution, transferable states and perfect state transfer.
//!
//! With an equally spaced real spectrum the propagator is periodic: at
//! `τ = π/√(1−γ²)` every level picks up the same phase up to a sign
//! `(−1)^n`, which acts on superpositions with real coefficients as
//! site reversal combined with complex conjugation.

use num_traits::{One, Zero};

use crate::linalg::nan_max;
use crate::angular::wigner_d;
use crate::chain::{pt_apply, ChainSpec, PotentialKind};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::pseudo::{eta_inner, metric_operator};
use crate::scalar::{cx, Cx, Real};
use crate::spectral::{analytic_eigensystem, level_scale, BiorthogonalSystem};

/// Transfer time `π / (level spacing)`.
pub fn tau<T: Real>(spec: &ChainSpec<T>) -> Result<T> {
    spec.require_unbroken()?;
    Ok(T::PI() / level_scale(spec))
}

/// `C_n = ⟨φ_n|Φ(0)⟩`.
pub fn expand_initial<T: Real>(state: &StateVector<T>, system: &BiorthogonalSystem<T>) -> Result<Vec<Cx<T>>> {
    system.left_vectors.iter().map(|phi| phi.inner(state)).collect()
}

/// `Σ_n C_n·e^{−iε_n t}·ψ_n`.
pub fn evolve<T: Real>(state: &StateVector<T>, t: T, system: &BiorthogonalSystem<T>) -> Result<StateVector<T>> {
    let coeffs = expand_initial(state, system)?;
    Ok(evolve_coefficients(&coeffs, t, system))
}

fn evolve_coefficients<T: Real>(coeffs: &[Cx<T>], t: T, system: &BiorthogonalSystem<T>) -> StateVector<T> {
    let dim = system.dim();
    let mut out = vec![Cx::zero(); dim];
    for ((c, eps), psi) in coeffs.iter().zip(&system.eigenvalues).zip(&system.right_vectors) {
        let w = *c * (cx(T::zero(), -t) * eps).exp();
        for (o, a) in out.iter_mut().zip(psi.amplitudes()) {
            *o = *o + w * a;
        }
    }
    StateVector::from_vec_unchecked(out)
}

/// Real expansion coefficients `C_m = 2·Re d_{m,l}/√Ω_l` and `Ω_l`.
pub fn transferable_coefficients<T: Real>(l: usize, spec: &ChainSpec<T>) -> Result<(Vec<T>, T)> {
    let system = analytic_eigensystem(spec)?;
    transferable_coefficients_with(l, &system)
}

fn transferable_coefficients_with<T: Real>(l: usize, system: &BiorthogonalSystem<T>) -> Result<(Vec<T>, T)> {
    let n = system.dim();
    let column: Vec<Cx<T>> = (1..=n)
        .map(|m| wigner_d(n, m, l, &system.angle))
        .collect::<Result<_>>()?;
    let two = T::lit(2.0);
    let omega = two + two * column.iter().fold(T::zero(), |acc, d| acc + d.norm_sqr());
    let root = omega.sqrt();
    Ok((column.iter().map(|d| two * d.re / root).collect(), omega))
}

/// `Ω₁ = 2 + 2(1−γ²)^{(1−N)/2}`, the closed form of `Ω_l` for `l = 1, N`.
pub fn omega_closed_form<T: Real>(spec: &ChainSpec<T>) -> T {
    let two = T::lit(2.0);
    let base = T::one() - spec.gamma * spec.gamma;
    two + two * base.powf((T::one() - T::count(spec.n_sites)) / two)
}

/// `Σ_m C_m ψ_m` in the site basis, Dirac-normalized.
pub fn transferable_state<T: Real>(l: usize, spec: &ChainSpec<T>) -> Result<StateVector<T>> {
    let system = analytic_eigensystem(spec)?;
    transferable_state_with(l, &system)
}

pub fn transferable_state_with<T: Real>(l: usize, system: &BiorthogonalSystem<T>) -> Result<StateVector<T>> {
    let (coeffs, _) = transferable_coefficients_with(l, system)?;
    let coeffs: Vec<Cx<T>> = coeffs.into_iter().map(|c| Cx::new(c, T::zero())).collect();
    Ok(evolve_coefficients(&coeffs, T::zero(), system).normalized())
}

/// Overlap of the evolved state with the reverse-conjugated initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport<T> {
    pub tau: T,
    /// `|⟨target|Φ(τ)⟩| / (‖target‖·‖Φ(τ)‖)`.
    pub fidelity: T,
    /// Unit phase of `⟨target|Φ(τ)⟩`.
    pub global_phase: Cx<T>,
}

pub fn pst_fidelity<T: Real>(state: &StateVector<T>, spec: &ChainSpec<T>) -> Result<TransferReport<T>> {
    pst_fidelity_with(state, &analytic_eigensystem(spec)?)
}

pub fn pst_fidelity_with<T: Real>(state: &StateVector<T>, system: &BiorthogonalSystem<T>) -> Result<TransferReport<T>> {
    let tau = tau(&system.spec)?;
    let evolved = evolve(state, tau, system)?;
    let target = pt_apply(state, true);
    let overlap = target.inner(&evolved)?;
    let denom = target.norm() * evolved.norm();
    let (fidelity, global_phase) = if denom.is_zero() || overlap.norm().is_zero() {
        (T::zero(), Cx::one())
    } else {
        (overlap.norm() / denom, overlap / overlap.norm())
    };
    Ok(TransferReport {
        tau,
        fidelity,
        global_phase,
    })
}

/// Uniformly sampled trajectory with `⟨Φ|Φ⟩` and `⟨Φ|η|Φ⟩` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace<T> {
    pub times: Vec<T>,
    pub snapshots: Vec<StateVector<T>>,
    pub dirac_norms: Vec<T>,
    pub eta_norms: Vec<T>,
}

impl<T: Real> EvolutionTrace<T> {
    /// `max_k |η_k − η_0| / η_0`.
    pub fn eta_norm_drift(&self) -> T {
        let first = self.eta_norms.first().copied().unwrap_or_else(T::one);
        self.eta_norms
            .iter()
            .fold(T::zero(), |acc, &x| nan_max(acc, (x - first).abs() / first))
    }
}

/// `steps` samples on `[0, t_max]`, endpoints included.
pub fn norm_trace<T: Real>(
    state: &StateVector<T>,
    spec: &ChainSpec<T>,
    t_max: T,
    steps: usize,
) -> Result<EvolutionTrace<T>> {
    let system = analytic_eigensystem(spec)?;
    let eta = match spec.kind {
        PotentialKind::Imaginary => metric_operator(spec)?.eta,
        PotentialKind::Real => ComplexMatrix::identity(spec.n_sites),
    };
    norm_trace_with(state, &system, &eta, t_max, steps)
}

pub fn norm_trace_with<T: Real>(
    state: &StateVector<T>,
    system: &BiorthogonalSystem<T>,
    eta: &ComplexMatrix<T>,
    t_max: T,
    steps: usize,
) -> Result<EvolutionTrace<T>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("a trace needs at least two samples".into()));
    }
    if !(t_max >= T::zero()) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("t_max must be finite and non-negative, got {t_max}")));
    }
    let coeffs = expand_initial(state, system)?;
    let mut trace = EvolutionTrace {
        times: Vec::with_capacity(steps),
        snapshots: Vec::with_capacity(steps),
        dirac_norms: Vec::with_capacity(steps),
        eta_norms: Vec::with_capacity(steps),
    };
    for k in 0..steps {
        let t = t_max * T::count(k) / T::count(steps - 1);
        let snap = evolve_coefficients(&coeffs, t, system);
        trace.dirac_norms.push(snap.norm_sqr());
        trace.eta_norms.push(eta_inner(&snap, &snap, eta)?.re);
        trace.times.push(t);
        trace.snapshots.push(snap);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_hamiltonian;
    use crate::linalg::rk4_propagate;
    use std::f64::consts::PI;

    fn spec(n: usize, g: f64) -> ChainSpec<f64> {
        ChainSpec::imaginary(n, g).unwrap()
    }

    fn near(a: Cx<f64>, b: Cx<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn expansion_examples() {
        let sys = analytic_eigensystem(&spec(2, 0.6)).unwrap();
        let c = expand_initial(&StateVector::site(2, 1).unwrap(), &sys).unwrap();
        assert!(near(c[0], cx(0.75, 0.25), 1e-14));
        assert!(near(c[1], cx(-0.75, 0.25), 1e-14));
        let c = expand_initial(&sys.right_vectors[0], &sys).unwrap();
        assert!(near(c[0], cx(1.0, 0.0), 1e-14) && near(c[1], cx(0.0, 0.0), 1e-14));
    }

    #[test]
    fn expansion_reconstructs_state() {
        let sys = analytic_eigensystem(&spec(12, 0.4)).unwrap();
        let state = StateVector::new((0..12).map(|i| cx((i as f64).cos(), 0.1 * i as f64)).collect()).unwrap();
        let back = evolve(&state, 0.0, &sys).unwrap();
        assert!(back.max_abs_diff(&state).unwrap() < 1e-10);
    }

    #[test]
    fn stationary_state_only_rotates() {
        let sys = analytic_eigensystem(&spec(6, 0.3)).unwrap();
        let t = 2.7;
        let out = evolve(&sys.right_vectors[1], t, &sys).unwrap();
        let phase = (cx(0.0, -t) * sys.eigenvalues[1]).exp();
        assert!(out.max_abs_diff(&sys.right_vectors[1].scale(phase)).unwrap() < 1e-12);
    }

    #[test]
    fn hermitian_two_site_swap() {
        let sys = analytic_eigensystem(&spec(2, 0.0)).unwrap();
        let out = evolve(&StateVector::site(2, 1).unwrap(), PI, &sys).unwrap();
        assert!(near(out[0], cx(0.0, 0.0), 1e-14) && near(out[1], cx(0.0, -1.0), 1e-14));
    }

    #[test]
    fn agrees_with_runge_kutta() {
        let s = spec(10, 0.5);
        let sys = analytic_eigensystem(&s).unwrap();
        let h = build_hamiltonian(&s).unwrap();
        let psi0 = StateVector::site(10, 1).unwrap();
        let a = evolve(&psi0, 1.0, &sys).unwrap();
        let b = rk4_propagate(&h, &psi0, 1.0, 1e-4).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-8);
        // the Dirac norm is not conserved
        let two = analytic_eigensystem(&spec(2, 0.5)).unwrap();
        let n = evolve(&StateVector::site(2, 1).unwrap(), 1.0, &two).unwrap().norm_sqr();
        assert!((n - 1.0).abs() > 1e-3);
    }

    #[test]
    fn transferable_two_site_example() {
        let st = transferable_state(1, &spec(2, 0.6)).unwrap();
        assert!(near(st[0], cx(0.948_683_298_050_513_8, 0.0), 1e-12));
        assert!(near(st[1], cx(0.0, -0.316_227_766_016_837_94), 1e-12));
        let (c, omega) = transferable_coefficients(1, &spec(2, 0.6)).unwrap();
        assert!((omega - 4.5).abs() < 1e-14);
        assert!((c[0] - 1.5 / 4.5f64.sqrt()).abs() < 1e-14 && (c[1] + 1.5 / 4.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn omega_closed_form_matches_sum() {
        for n in [2, 5, 17, 40] {
            for g in [0.1, 0.6, 0.85] {
                let s = spec(n, g);
                let (_, omega) = transferable_coefficients(1, &s).unwrap();
                assert!((omega - omega_closed_form(&s)).abs() < 1e-10 * omega, "N={n} γ={g}");
                let (_, last) = transferable_coefficients(n, &s).unwrap();
                assert!((last - omega).abs() < 1e-10 * omega);
            }
        }
        // the alternative closed form 2 + (1−γ²)^{1−N} disagrees with the sum
        let printed = 2.0 + (1.0f64 - 0.36).powi(-1);
        assert!((printed - 3.5625).abs() < 1e-12);
        assert!((omega_closed_form(&spec(2, 0.6)) - 4.5).abs() < 1e-12);
    }

    #[test]
    fn transferable_state_at_zero_gamma_is_a_site_state() {
        for l in 1..=7 {
            let st = transferable_state(l, &spec(7, 0.0)).unwrap();
            assert!(st.max_abs_diff(&StateVector::site(7, l).unwrap()).unwrap() < 1e-12);
        }
        assert!(matches!(transferable_state(8, &spec(7, 0.0)), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(transferable_state(1, &spec(7, 1.0)), Err(Error::EpSingular));
    }

    #[test]
    fn perfect_transfer_of_real_superpositions() {
        let st = transferable_state(1, &spec(2, 0.6)).unwrap();
        assert!((pst_fidelity(&st, &spec(2, 0.6)).unwrap().fidelity - 1.0).abs() < 1e-10);
        for n in [3, 10, 30] {
            let s = spec(n, 0.5);
            let sys = analytic_eigensystem(&s).unwrap();
            let coeffs: Vec<Cx<f64>> = (0..n).map(|k| cx(((k * 7 + 3) % 5) as f64 - 2.0, 0.0)).collect();
            let st = evolve_coefficients(&coeffs, 0.0, &sys);
            let r = pst_fidelity_with(&st, &sys).unwrap();
            assert!((r.fidelity - 1.0).abs() < 1e-9, "N={n}");
            assert!((r.global_phase.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bare_site_state_is_not_transferred() {
        let r = pst_fidelity(&StateVector::site(10, 1).unwrap(), &spec(10, 0.5)).unwrap();
        assert!(r.fidelity < 0.999, "{}", r.fidelity);
    }

    #[test]
    fn transfer_is_mirror_symmetric() {
        let s = spec(9, 0.4);
        for l in 1..=9 {
            let a = pst_fidelity(&transferable_state(l, &s).unwrap(), &s).unwrap().fidelity;
            let b = pst_fidelity(&transferable_state(10 - l, &s).unwrap(), &s).unwrap().fidelity;
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn revival_after_two_transfer_times() {
        for n in [2, 7, 20] {
            let s = spec(n, 0.6);
            let sys = analytic_eigensystem(&s).unwrap();
            let psi0 = StateVector::new((0..n).map(|i| cx(1.0 / (i + 1) as f64, (i as f64).sin())).collect()).unwrap();
            let back = evolve(&psi0, 2.0 * tau(&s).unwrap(), &sys).unwrap();
            let f = psi0.inner(&back).unwrap().norm() / (psi0.norm() * back.norm());
            assert!((f - 1.0).abs() < 1e-8, "N={n}");
        }
    }

    #[test]
    fn hermitian_mirror_at_pi() {
        for n in 1..=50 {
            let sys = analytic_eigensystem(&spec(n, 0.0)).unwrap();
            let out = evolve(&StateVector::site(n, 1).unwrap(), PI, &sys).unwrap();
            assert!((out[n - 1].norm() - 1.0).abs() < 1e-10, "N={n}");
        }
    }

    #[test]
    fn locality_scales_quadratically() {
        let n = 20;
        let dist = |g: f64| {
            let st = transferable_state(1, &spec(n, g)).unwrap();
            let mut approx = StateVector::zeros(n).into_amplitudes();
            approx[0] = cx(1.0, 0.0);
            approx[1] = cx(0.0, -(g / 2.0) * ((n - 1) as f64).sqrt());
            let approx = StateVector::new(approx).unwrap().normalized();
            st.max_abs_diff(&approx).unwrap()
        };
        let ratio = dist(0.02) / dist(0.01);
        assert!((ratio - 4.0).abs() < 0.8, "{ratio}");
    }

    #[test]
    fn trace_conserves_eta_norm() {
        let s = spec(10, 0.5);
        let st = StateVector::site(10, 1).unwrap();
        let trace = norm_trace(&st, &s, 2.0 * tau(&s).unwrap(), 200).unwrap();
        assert_eq!(trace.times.len(), 200);
        assert!(trace.eta_norm_drift() < 1e-8);
        let spread = trace.dirac_norms.iter().fold(0.0f64, |acc, &x| acc.max((x - 1.0).abs()));
        assert!(spread > 1e-3);
        let herm = norm_trace(&st, &spec(10, 0.0), 10.0, 50).unwrap();
        assert!(herm.dirac_norms.iter().all(|&x| (x - 1.0).abs() < 1e-10));
        assert!(norm_trace(&st, &s, 1.0, 1).is_err());
    }
}
