//! Zero-order Bessel function of the first kind and its zeros.

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::scalar::Real;

/// Largest supported `|x|`.
pub const J0_DOMAIN: f64 = 1e4;

/// Below this the power series is summed directly; above it Miller's backward
/// recurrence is used.
const SERIES_LIMIT: f64 = 8.0;

fn j0_series<T: Real>(x: T) -> T {
    let q = x * x * T::lit(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    let mut k = T::zero();
    loop {
        k += T::one();
        term = -term * q / (k * k);
        sum += term;
        if term.abs() <= T::epsilon() * T::lit(1e-3) * sum.abs().max(T::one()) && k * k > q {
            return sum;
        }
    }
}

/// Backward recurrence `J_{k-1} = (2k/x) J_k − J_{k+1}` from far above the
/// turning point, normalized with `J_0 + 2 Σ J_{2k} = 1`.
fn j0_miller<T: Real>(x: T) -> T {
    let xf = x.as_f64();
    let start = (xf + 12.0 * xf.cbrt() + 40.0) as usize;
    let start = start + (start & 1);
    let two_over_x = T::lit(2.0) / x;
    let big = T::lit(1e100);
    let mut next = T::zero();
    let mut cur = T::lit(1e-30);
    let mut norm = T::zero();
    for k in (1..=start).rev() {
        let prev = T::from_usize(k).unwrap() * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{k-1}
        if (k - 1) % 2 == 0 && k > 1 {
            norm += T::lit(2.0) * cur;
        }
        if cur.abs() > big {
            let s = T::one() / big;
            cur *= s;
            next *= s;
            norm *= s;
        }
    }
    cur / (norm + cur)
}

/// `J_0(x)` with absolute error below `1e-12` in double precision.
pub fn bessel_j0<T: Real>(x: T) -> Result<T> {
    let ax = x.abs();
    if ax.is_nan() || ax.as_f64() >= J0_DOMAIN {
        return Err(Error::Domain { x: x.as_f64(), limit: J0_DOMAIN });
    }
    if ax <= T::lit(SERIES_LIMIT) {
        Ok(j0_series(ax))
    } else {
        Ok(j0_miller(ax))
    }
}

/// The first `n` positive zeros of `J_0`, bracketed on a unit grid and refined
/// by bisection.
pub fn bessel_j0_zeros<T: Real>(n: usize) -> Result<Vec<T>> {
    let mut zeros = Vec::with_capacity(n);
    let step = T::one();
    let mut lo = T::zero();
    let mut f_lo = bessel_j0(lo)?;
    while zeros.len() < n {
        let hi = lo + step;
        let f_hi = bessel_j0(hi)?;
        if f_lo * f_hi <= T::zero() {
            zeros.push(bisect(lo, hi, f_lo)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(zeros)
}

fn bisect<T: Real>(mut lo: T, mut hi: T, f_lo: T) -> Result<T> {
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(4.0)) * hi.max(T::one());
    let lo_neg = f_lo < T::zero();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * T::lit(0.5);
        let f_mid = bessel_j0(mid)?;
        if (f_mid < T::zero()) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Drive amplitudes `ξ_k = j_{0,k} κ ω_e / (4g)` at which coherent
/// destruction of tunneling occurs in the effective spin model.
pub fn cdt_amplitudes<T: Real>(params: &SystemParams<T>, n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::InvalidParams("need at least one CDT amplitude".into()));
    }
    if params.g.is_nan() || params.g <= T::zero() {
        return Err(Error::InvalidParams(format!("CDT amplitudes need g > 0, got {}", params.g)));
    }
    if params.kappa.is_nan() || params.kappa <= T::zero() {
        return Err(Error::InvalidParams(format!("CDT amplitudes need kappa > 0, got {}", params.kappa)));
    }
    if params.omega_e.is_nan() || params.omega_e <= T::zero() {
        return Err(Error::InvalidParams("omega_e must be > 0".into()));
    }
    let scale = params.kappa * params.omega_e / (T::lit(4.0) * params.g);
    Ok(bessel_j0_zeros::<T>(n)?.into_iter().map(|j| j * scale).collect())
}
