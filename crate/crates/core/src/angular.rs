//! Spin-`(N−1)/2` angular momentum in the site basis, the mixing angle
//! `β(γ)`, Wigner d-functions at complex angles and `y`-rotations.
//!
//! Site `l` carries magnetic number `m = (N+1)/2 − l`. The d-function
//! `d_{n,l}(θ)` is the standard `d^j_{m'm}(θ)` with `m' = n−1−j` and
//! `m = l−1−j`, and the rotation matrix `e^{−iθJ_y}` has entries
//! `[R]_{l,n} = d_{n,l}(θ)`, so column `n` of `R(β)` is the `n`-th
//! eigenvector of the chain.
//!
//! Half-angle cosines and sines are carried alongside `β` and built from
//! square roots of `γ` wherever possible; the d-functions are then
//! evaluated through Jacobi polynomials, which avoids the catastrophic
//! cancellation of the alternating factorial sum at large `N`.

use num_traits::{One, Zero};

use crate::chain::PotentialKind;
use crate::error::{Error, Result};
use crate::linalg::{ln_factorial, log_stable_sum, ComplexMatrix};
use crate::scalar::{cx, re, Cx, Real};

/// Site-basis matrices of `J⁺, J⁻, J_x, J_y, J_z` for spin `(N−1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularOps<T> {
    pub n_sites: usize,
    pub j_plus: ComplexMatrix<T>,
    pub j_minus: ComplexMatrix<T>,
    pub j_x: ComplexMatrix<T>,
    pub j_y: ComplexMatrix<T>,
    pub j_z: ComplexMatrix<T>,
}

impl<T: Real> AngularOps<T> {
    pub fn new(n_sites: usize) -> Self {
        let n = n_sites;
        let j_plus = ComplexMatrix::from_real(n, n, |r, c| {
            if c == r + 1 {
                T::count((r + 1) * (n - r - 1)).sqrt()
            } else {
                T::zero()
            }
        });
        let j_minus = j_plus.adjoint();
        let half = T::lit(0.5);
        let j_x = (&j_plus + &j_minus).scale_real(half);
        let j_y = (&j_plus - &j_minus).scale(cx(T::zero(), -half));
        let j_z = ComplexMatrix::from_real(n, n, |r, c| {
            if r == c {
                T::count(n + 1) * half - T::count(r + 1)
            } else {
                T::zero()
            }
        });
        Self {
            n_sites,
            j_plus,
            j_minus,
            j_x,
            j_y,
            j_z,
        }
    }
}

/// A (possibly complex) rotation angle together with its half-angle
/// cosine and sine and its full cosine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngle<T> {
    pub beta: Cx<T>,
    pub cos_half: Cx<T>,
    pub sin_half: Cx<T>,
    pub cos_full: Cx<T>,
}

impl<T: Real> MixingAngle<T> {
    /// General complex angle via complex trigonometry.
    pub fn from_complex(beta: Cx<T>) -> Self {
        let half = beta * T::lit(0.5);
        Self {
            beta,
            cos_half: half.cos(),
            sin_half: half.sin(),
            cos_full: beta.cos(),
        }
    }

    /// Angle given directly by its half-angle cosine and sine; `beta` is
    /// kept for display only.
    pub fn from_half(beta: Cx<T>, cos_half: Cx<T>, sin_half: Cx<T>) -> Self {
        Self {
            beta,
            cos_half,
            sin_half,
            cos_full: cos_half * cos_half - sin_half * sin_half,
        }
    }

    /// Purely imaginary angle `θ = i·x` given `cosh(x/2)` and `sinh(x/2)`.
    pub fn imaginary(x: T, cosh_half: T, sinh_half: T) -> Self {
        Self::from_half(cx(T::zero(), x), re(cosh_half), cx(T::zero(), sinh_half))
    }

    /// `θ = i·x` from `x` alone.
    pub fn imaginary_from(x: T) -> Self {
        let h = x * T::lit(0.5);
        Self::imaginary(x, h.cosh(), h.sinh())
    }

    /// The angle `−θ`.
    pub fn negated(&self) -> Self {
        Self {
            beta: -self.beta,
            cos_half: self.cos_half,
            sin_half: -self.sin_half,
            cos_full: self.cos_full,
        }
    }
}

/// `β(γ)` with `tan β = 1/γ` (real potential) or `tan β = 1/(iγ)`
/// (imaginary potential), on the branch with `β(0) = π/2`.
pub fn beta_angle<T: Real>(gamma: T, kind: PotentialKind) -> Result<MixingAngle<T>> {
    if !gamma.is_finite() {
        return Err(Error::InvalidSpec(format!("gamma must be finite, got {gamma}")));
    }
    let one = T::one();
    let half = T::lit(0.5);
    match kind {
        PotentialKind::Real => {
            let r = (one + gamma * gamma).sqrt();
            let (cos_b, sin_b) = (gamma / r, r.recip());
            let (c, s) = if cos_b >= T::zero() {
                let c = ((one + cos_b) * half).sqrt();
                (c, sin_b / (c + c))
            } else {
                let s = ((one - cos_b) * half).sqrt();
                (sin_b / (s + s), s)
            };
            let mut angle = MixingAngle::from_half(re(one.atan2(gamma)), re(c), re(s));
            angle.cos_full = re(cos_b);
            Ok(angle)
        }
        PotentialKind::Imaginary => {
            let abs = gamma.abs();
            if abs == one {
                return Err(Error::EpSingular);
            }
            if abs > one {
                // principal arctan(1/(iγ)) = arctan(−i/γ)
                let z = cx(T::zero(), -gamma.recip());
                return Ok(MixingAngle::from_complex(z.atan()));
            }
            // x = atanh γ, β = π/2 − i·x
            let ch = (one - gamma * gamma).sqrt().recip();
            let cosh_h = ((ch + one) * half).sqrt();
            let sinh_h = gamma * ch / (cosh_h + cosh_h);
            let r2 = T::FRAC_1_SQRT_2();
            let x = gamma.atanh();
            let mut angle = MixingAngle::from_half(
                cx(T::FRAC_PI_2(), -x),
                cx(cosh_h * r2, sinh_h * r2),
                cx(cosh_h * r2, -sinh_h * r2),
            );
            angle.cos_full = cx(T::zero(), gamma * ch);
            Ok(angle)
        }
    }
}

fn check_indices(n_sites: usize, n: usize, l: usize) -> Result<()> {
    for idx in [n, l] {
        if idx == 0 || idx > n_sites {
            return Err(Error::IndexOutOfRange {
                index: idx,
                max: n_sites,
            });
        }
    }
    Ok(())
}

fn powi<T: Real>(z: Cx<T>, e: usize) -> Cx<T> {
    (0..e).fold(Cx::one(), |acc, _| acc * z)
}

/// Jacobi polynomial `P_k^{(a,b)}(z)` by forward recurrence.
fn jacobi<T: Real>(k: usize, a: usize, b: usize, z: Cx<T>) -> Cx<T> {
    let one = Cx::<T>::one();
    if k == 0 {
        return one;
    }
    let (af, bf) = (T::count(a), T::count(b));
    let two = T::lit(2.0);
    let mut prev = one;
    let mut cur = re(af + one.re) + (z - one) * ((af + bf + two) / two);
    for i in 2..=k {
        let i_f = T::count(i);
        let s = two * i_f + af + bf;
        let denom = two * i_f * (i_f + af + bf) * (s - two);
        let lin = (s - one.re) * (s * (s - two));
        let shift = (s - one.re) * (af * af - bf * bf);
        let back = two * (i_f + af - one.re) * (i_f + bf - one.re) * s;
        let next = (z * lin + re(shift)) * cur - prev * back;
        prev = cur;
        cur = next / denom;
    }
    cur
}

/// Wigner d-function `d_{n,l}(θ)` for `N` sites (1-based `n`, `l`).
pub fn wigner_d<T: Real>(n_sites: usize, n: usize, l: usize, angle: &MixingAngle<T>) -> Result<Cx<T>> {
    check_indices(n_sites, n, l)?;
    let big = n_sites;
    let k = (l - 1).min(big - l).min(n - 1).min(big - n);
    let (a, lambda) = if k == l - 1 {
        (n - l, n - l)
    } else if k == big - l || k == n - 1 {
        (l - n, 0)
    } else {
        (n - l, n - l)
    };
    let b = big - 1 - 2 * k - a;
    let ratio = (1..=a).fold(T::one(), |acc, i| acc * T::count(k + b + i) / T::count(k + i));
    let sign = if lambda % 2 == 0 { T::one() } else { -T::one() };
    let poly = jacobi(k, a, b, angle.cos_full);
    Ok(powi(angle.sin_half, a) * powi(angle.cos_half, b) * poly * (sign * ratio.sqrt()))
}

/// Cross-check path: the explicit alternating factorial sum. Terms are
/// formed directly for `N ≤ 30` and in the log domain above that.
pub fn wigner_d_explicit<T: Real>(
    n_sites: usize,
    n: usize,
    l: usize,
    angle: &MixingAngle<T>,
) -> Result<Cx<T>> {
    check_indices(n_sites, n, l)?;
    let big = n_sites;
    let (c, s) = (angle.cos_half, angle.sin_half);
    // ν ranges where l−1−ν, n−l+ν, N−n−ν are all non-negative
    let lo = l.saturating_sub(n);
    let hi = (l - 1).min(big - n);
    let exps = |nu: usize| (big - 1 + l - n - 2 * nu, n + 2 * nu - l);
    let sign = |nu: usize| if (n + nu - l) % 2 == 0 { T::one() } else { -T::one() };
    let ln_num = (ln_factorial::<T>(n - 1)
        + ln_factorial::<T>(big - n)
        + ln_factorial::<T>(l - 1)
        + ln_factorial::<T>(big - l))
        * T::lit(0.5);
    let ln_den = |nu: usize| {
        ln_factorial::<T>(l - 1 - nu)
            + ln_factorial::<T>(nu)
            + ln_factorial::<T>(n + nu - l)
            + ln_factorial::<T>(big - n - nu)
    };
    if lo > hi {
        return Ok(Cx::zero());
    }
    if big <= 30 {
        let fact = |m: usize| (2..=m).fold(T::one(), |acc, k| acc * T::count(k));
        let num = (fact(n - 1) * fact(big - n) * fact(l - 1) * fact(big - l)).sqrt();
        let sum = (lo..=hi).fold(Cx::zero(), |acc, nu| {
            let den = fact(l - 1 - nu) * fact(nu) * fact(n + nu - l) * fact(big - n - nu);
            let (ec, es) = exps(nu);
            acc + powi(c, ec) * powi(s, es) * (sign(nu) * num / den)
        });
        return Ok(sum);
    }
    let log_pow = |z: Cx<T>, e: usize| -> (T, Cx<T>) {
        if e == 0 {
            return (T::zero(), Cx::one());
        }
        let r = z.norm();
        if r.is_zero() {
            return (T::neg_infinity(), Cx::one());
        }
        (T::count(e) * r.ln(), powi(z / r, e))
    };
    let terms: Vec<(T, Cx<T>)> = (lo..=hi)
        .map(|nu| {
            let (ec, es) = exps(nu);
            let (lc, pc) = log_pow(c, ec);
            let (ls, ps) = log_pow(s, es);
            (ln_num - ln_den(nu) + lc + ls, pc * ps * sign(nu))
        })
        .collect();
    Ok(log_stable_sum(&terms))
}

/// Table of `d_{n,l}` with rows `n` and columns `l`.
pub fn wigner_d_matrix<T: Real>(n_sites: usize, angle: &MixingAngle<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(n_sites, n_sites, |r, c| {
        wigner_d(n_sites, r + 1, c + 1, angle).expect("indices in range")
    })
}

/// `e^{−iθJ_y}` for a complex angle `θ`.
pub fn rotation_operator<T: Real>(n_sites: usize, theta: Cx<T>) -> ComplexMatrix<T> {
    rotation_from_angle(n_sites, &MixingAngle::from_complex(theta))
}

/// `e^{−iθJ_y}` from precomputed half-angle data.
pub fn rotation_from_angle<T: Real>(n_sites: usize, angle: &MixingAngle<T>) -> ComplexMatrix<T> {
    wigner_d_matrix(n_sites, angle).transpose()
}
