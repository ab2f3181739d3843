//! Order parameters and phase labels of stationary trajectories, plus the
//! Bessel-zero drive amplitudes they are compared against.

mod bessel;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j0, bessel_j0_zeros, cdt_amplitudes, J0_DOMAIN};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum number of complete drive periods an analysis window must contain.
pub const MIN_PERIODS: usize = 16;

/// Photon amplitude averaged over consecutive drive periods.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodAverages<T = f64> {
    pub values: Vec<Complex<T>>,
    pub t_e: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderParameters<T = f64> {
    /// Mean of the period averages.
    pub alpha_order: Complex<T>,
    /// RMS spread of the period averages about their mean.
    pub sigma_alpha: T,
}

/// Stationary-state classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhaseLabel {
    /// Drive-periodic and symmetric about zero.
    #[serde(rename = "regular")]
    RegularOscillating,
    /// Drive-periodic with a nonzero mean photon amplitude.
    #[serde(rename = "ordered")]
    Ordered,
    /// Not periodic with the drive period.
    #[serde(rename = "nonperiodic")]
    NonPeriodic,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 3] = [Self::RegularOscillating, Self::Ordered, Self::NonPeriodic];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RegularOscillating => "regular",
            Self::Ordered => "ordered",
            Self::NonPeriodic => "nonperiodic",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(Self::RegularOscillating),
            "ordered" => Ok(Self::Ordered),
            "nonperiodic" => Ok(Self::NonPeriodic),
            other => Err(Error::MalformedRow(format!("unknown phase label {other:?}"))),
        }
    }
}

/// Classification cutoffs in units of the scaled photon amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds<T = f64> {
    pub eps_order: T,
    pub eps_sigma: T,
}

impl<T: Real> Default for Thresholds<T> {
    fn default() -> Self {
        Self { eps_order: T::lit(0.01), eps_sigma: T::lit(0.005) }
    }
}

impl<T: Real> Thresholds<T> {
    pub fn validate(&self) -> Result<()> {
        if self.eps_order > T::zero() && self.eps_sigma > T::zero() {
            Ok(())
        } else {
            Err(Error::InvalidConfig("classification thresholds must be > 0".into()))
        }
    }
}

/// `∫_a^b` of the piecewise-linear interpolant through `(times, values)`,
/// starting the search at segment `from`. Returns the integral and the segment
/// containing `b`.
fn linear_integral<T: Real>(
    times: &[T],
    values: &[Complex<T>],
    a: T,
    b: T,
    mut from: usize,
) -> (Complex<T>, usize) {
    let half = T::lit(0.5);
    let interp = |i: usize, t: T| {
        let (t0, t1) = (times[i], times[i + 1]);
        let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { T::zero() };
        values[i] + (values[i + 1] - values[i]) * w
    };
    let mut acc = Complex::new(T::zero(), T::zero());
    while from + 1 < times.len() && times[from + 1] <= a {
        from += 1;
    }
    let mut i = from;
    while i + 1 < times.len() && times[i] < b {
        let lo = times[i].max(a);
        let hi = times[i + 1].min(b);
        if hi > lo {
            acc += (interp(i, lo) + interp(i, hi)) * (half * (hi - lo));
        }
        if times[i + 1] >= b {
            break;
        }
        i += 1;
    }
    (acc, i)
}

/// Period averages of sampled `α(t)` after dropping the leading
/// `discard_fraction` of the time span. Windows start at the first multiple
/// of the drive period not earlier than the cutoff.
pub fn period_averages_of<T: Real>(
    times: &[T],
    values: &[Complex<T>],
    t_e: T,
    discard_fraction: T,
) -> Result<PeriodAverages<T>> {
    assert_eq!(times.len(), values.len(), "times and values must align");
    let too_short = |periods| Error::TooShortTrajectory { periods, needed: MIN_PERIODS };
    if times.len() < 2 {
        return Err(too_short(0));
    }
    let (first, last) = (times[0], times[times.len() - 1]);
    let cutoff = first + discard_fraction * (last - first);
    let slack = T::lit(1e-9);
    let start = (cutoff / t_e - slack).ceil() * t_e;
    let windows = ((last - start) / t_e + slack).floor().to_usize().unwrap_or(0);
    if windows < MIN_PERIODS {
        return Err(too_short(windows));
    }
    let mut out = Vec::with_capacity(windows);
    let mut seg = 0;
    for j in 0..windows {
        let a = start + T::from_usize(j).unwrap() * t_e;
        let b = a + t_e;
        let (integral, next) = linear_integral(times, values, a, b, seg);
        seg = next;
        out.push(integral / t_e);
    }
    Ok(PeriodAverages { values: out, t_e })
}

/// [`period_averages_of`] applied to a trajectory's photon amplitude.
pub fn period_averages<T: Real>(traj: &Trajectory<T>, discard_fraction: T) -> Result<PeriodAverages<T>> {
    period_averages_of(&traj.times(), &traj.alphas(), traj.params.drive_period(), discard_fraction)
}

pub fn order_parameters<T: Real>(pa: &PeriodAverages<T>) -> OrderParameters<T> {
    let n = T::from_usize(pa.values.len().max(1)).unwrap();
    let zero = Complex::new(T::zero(), T::zero());
    let mean = pa.values.iter().fold(zero, |acc, v| acc + v) / n;
    let var = pa.values.iter().fold(T::zero(), |acc, v| acc + (v - mean).norm_sqr()) / n;
    OrderParameters { alpha_order: mean, sigma_alpha: var.sqrt() }
}

pub fn classify<T: Real>(op: &OrderParameters<T>, thresholds: &Thresholds<T>) -> PhaseLabel {
    if op.sigma_alpha.is_nan() || op.sigma_alpha >= thresholds.eps_sigma {
        PhaseLabel::NonPeriodic
    } else if op.alpha_order.norm() >= thresholds.eps_order {
        PhaseLabel::Ordered
    } else {
        PhaseLabel::RegularOscillating
    }
}

/// Period averages, order parameters and label in one call.
pub fn analyze<T: Real>(
    traj: &Trajectory<T>,
    thresholds: &Thresholds<T>,
) -> Result<(OrderParameters<T>, PhaseLabel)> {
    let pa = period_averages(traj, traj.config.discard_fraction)?;
    let op = order_parameters(&pa);
    Ok((op, classify(&op, thresholds)))
}
