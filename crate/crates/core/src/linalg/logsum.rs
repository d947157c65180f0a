use num_traits::Zero;

use crate::scalar::{Cx, Real};

/// Sums `Σ exp(log_magnitude)·phase` after factoring out the largest
/// log-magnitude, so terms far outside the floating-point range still
/// combine correctly. An empty list sums to zero.
pub fn log_stable_sum<T: Real>(terms: &[(T, Cx<T>)]) -> Cx<T> {
    let Some(peak) = terms
        .iter()
        .map(|&(l, _)| l)
        .filter(|l| *l > T::neg_infinity())
        .reduce(T::max)
    else {
        return Cx::zero();
    };
    let scaled = terms
        .iter()
        .fold(Cx::zero(), |acc, &(l, phase)| acc + phase * (l - peak).exp());
    scaled * peak.exp()
}

/// `ln n!` by direct summation of `ln k`.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::zero(), |acc, k| acc + T::count(k).ln())
}
