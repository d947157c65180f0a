use super::{ComplexMatrix, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Integrates `i·dΦ/dt = h·Φ` from 0 to `t` with classical fourth-order
/// Runge-Kutta. The step is shrunk so that an integer number of steps lands
/// exactly on `t`.
pub fn rk4_propagate<T: Real>(
    h: &ComplexMatrix<T>,
    psi0: &StateVector<T>,
    t: T,
    dt: T,
) -> Result<StateVector<T>> {
    let mut out = rk4_trajectory(h, psi0, &[t], dt)?;
    Ok(out.pop().expect("one sample"))
}

/// Same integrator, sampled at each of `times` (non-decreasing, ≥ 0).
pub fn rk4_trajectory<T: Real>(
    h: &ComplexMatrix<T>,
    psi0: &StateVector<T>,
    times: &[T],
    dt: T,
) -> Result<Vec<StateVector<T>>> {
    if !h.is_square() || h.cols() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: psi0.dim(),
        });
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidArgument("time step must be positive".into()));
    }
    let mut now = T::zero();
    let mut state = psi0.clone();
    let mut samples = Vec::with_capacity(times.len());
    for &target in times {
        if !(target >= now) || !target.is_finite() {
            return Err(Error::InvalidArgument(
                "sample times must be finite, non-negative and non-decreasing".into(),
            ));
        }
        let span = target - now;
        let steps = (span / dt).ceil().to_usize().unwrap_or(0);
        if steps > 0 {
            let step = span / T::count(steps);
            for _ in 0..steps {
                state = rk4_step(h, &state, step);
            }
        }
        now = target;
        samples.push(state.clone());
    }
    Ok(samples)
}

fn rk4_step<T: Real>(h: &ComplexMatrix<T>, psi: &StateVector<T>, dt: T) -> StateVector<T> {
    // dΦ/dt = −i·h·Φ
    let minus_i = cx(T::zero(), -T::one());
    let deriv = |v: &StateVector<T>| h.apply(v).expect("checked dims").scale(minus_i);
    let half = Cx::new(dt * T::lit(0.5), T::zero());
    let full = Cx::new(dt, T::zero());

    let k1 = deriv(psi);
    let k2 = deriv(&psi.axpy(half, &k1).expect("dims"));
    let k3 = deriv(&psi.axpy(half, &k2).expect("dims"));
    let k4 = deriv(&psi.axpy(full, &k3).expect("dims"));

    let sixth = dt / T::lit(6.0);
    let amps = (0..psi.dim())
        .map(|i| psi[i] + (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * sixth)
        .collect();
    StateVector::from_vec_unchecked(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_level() -> ComplexMatrix<f64> {
        ComplexMatrix::from_real(2, 2, |r, c| if r != c { 0.5 } else { 0.0 })
    }

    /// exp(−i·t·σx/2)·(1, 0) = (cos t/2, −i sin t/2)
    fn exact(t: f64) -> StateVector<f64> {
        StateVector::new(vec![cx((t / 2.0).cos(), 0.0), cx(0.0, -(t / 2.0).sin())]).unwrap()
    }

    #[test]
    fn null_generator_leaves_state_unchanged() {
        let psi = StateVector::new(vec![cx(0.3, 0.1), cx(-0.2, 0.9), cx(0.0, 1.0)]).unwrap();
        let out = rk4_propagate(&ComplexMatrix::zeros(3, 3), &psi, 5.0, 1e-2).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn half_period_swaps_the_two_sites() {
        let psi0 = StateVector::site(2, 1).unwrap();
        let out = rk4_propagate(&two_level(), &psi0, PI, 1e-4).unwrap();
        assert!(out.max_abs_diff(&exact(PI)).unwrap() < 1e-8);
        assert!((out[1] - cx(0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let psi0 = StateVector::site(2, 1).unwrap();
        let t = 3.0;
        let err = |dt: f64| {
            rk4_propagate(&two_level(), &psi0, t, dt)
                .unwrap()
                .max_abs_diff(&exact(t))
                .unwrap()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn hermitian_norm_drift_is_tiny() {
        let psi0 = StateVector::site(2, 1).unwrap();
        let out = rk4_propagate(&two_level(), &psi0, 10.0, 1e-3).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_mismatch_and_bad_step() {
        let psi = StateVector::<f64>::site(3, 1).unwrap();
        assert!(matches!(
            rk4_propagate(&two_level(), &psi, 1.0, 1e-3),
            Err(Error::DimensionMismatch { .. })
        ));
        let psi = StateVector::<f64>::site(2, 1).unwrap();
        assert!(rk4_propagate(&two_level(), &psi, 1.0, 0.0).is_err());
    }
}
