//! Fixed-step integration of the mean-field equations.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dynamics::rhs::{effective_photon_amplitude, reported_frame, rhs, StateVector};
use crate::dynamics::rk4::step_rk4;
use crate::error::{Error, Result};
use crate::linalg::{norm3, Vec3};
use crate::model::{AtomState, DissipatorMode, MeanFieldState, ModelKind, SystemParams};
use crate::scalar::Real;

/// Time stepping and sampling controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationConfig<T = f64> {
    pub dt: T,
    pub t_end: T,
    /// Record every `sample_stride`-th step.
    pub sample_stride: usize,
    /// Leading fraction of the trajectory treated as transient by analysis.
    pub discard_fraction: T,
    /// Added once to `m^x` of the initial state.
    pub perturbation: T,
}

impl<T: Real> IntegrationConfig<T> {
    /// Defaults for a drive at `omega_e`: 1000 steps per period and a run of
    /// 10000π time units.
    pub fn for_drive(omega_e: T) -> Self {
        Self {
            dt: T::TAU() / omega_e / T::lit(1000.0),
            t_end: T::lit(10000.0) * T::PI(),
            sample_stride: 10,
            discard_fraction: T::lit(0.8),
            perturbation: T::zero(),
        }
    }

    pub fn with_t_end(mut self, t_end: T) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_discard(mut self, fraction: T) -> Self {
        self.discard_fraction = fraction;
        self
    }

    pub fn with_perturbation(mut self, eps: T) -> Self {
        self.perturbation = eps;
        self
    }

    /// Number of steps needed to reach `t_end` from `t0`.
    pub fn steps_from(&self, t0: T) -> usize {
        let n = ((self.t_end - t0) / self.dt - T::lit(1e-6)).ceil();
        n.to_usize().unwrap_or(0)
    }

    pub fn validate(&self, params: &SystemParams<T>) -> Result<()> {
        let period = params.drive_period();
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.dt > period / T::lit(100.0) * T::lit(1.0 + 1e-12) {
            return bad(format!("dt = {} exceeds T_e/100 = {}", self.dt, period / T::lit(100.0)));
        }
        if !self.t_end.is_finite() || self.t_end < period * T::lit(10.0) * T::lit(1.0 - 1e-12) {
            return bad(format!("t_end = {} shorter than 10 drive periods", self.t_end));
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be >= 1".into());
        }
        if !(self.discard_fraction >= T::zero() && self.discard_fraction < T::one()) {
            return bad(format!("discard_fraction must lie in [0, 1), got {}", self.discard_fraction));
        }
        if !self.perturbation.is_finite() {
            return bad("perturbation must be finite".into());
        }
        Ok(())
    }
}

impl Default for IntegrationConfig<f64> {
    fn default() -> Self {
        Self::for_drive(1.0)
    }
}

/// One recorded point of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample<T = f64> {
    pub t: T,
    pub alpha: Complex<T>,
    pub m: Vec3<T>,
    pub sigma: T,
    pub rate_l: T,
}

/// Diagnostics accumulated over every step, not only recorded samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationStats<T = f64> {
    pub steps: usize,
    /// Largest `|Tr ρ − 1|` seen before renormalization.
    pub max_trace_deviation: T,
    pub min_eigenvalue: T,
    pub min_bloch_norm: T,
    pub max_bloch_norm: T,
}

impl<T: Real> IntegrationStats<T> {
    fn new(state: &MeanFieldState<T>) -> Self {
        let n = norm3(&state.bloch());
        Self {
            steps: 0,
            max_trace_deviation: T::zero(),
            min_eigenvalue: state.atom.min_eigenvalue(),
            min_bloch_norm: n,
            max_bloch_norm: n,
        }
    }

    fn record(&mut self, state: &MeanFieldState<T>, trace_dev: T) {
        self.steps += 1;
        self.max_trace_deviation = self.max_trace_deviation.max(trace_dev);
        self.min_eigenvalue = self.min_eigenvalue.min(state.atom.min_eigenvalue());
        let n = norm3(&state.bloch());
        self.min_bloch_norm = self.min_bloch_norm.min(n);
        self.max_bloch_norm = self.max_bloch_norm.max(n);
    }
}

/// Time-sampled observables of one run, with the inputs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T = f64> {
    pub samples: Vec<Sample<T>>,
    pub model: ModelKind,
    pub mode: DissipatorMode,
    pub params: SystemParams<T>,
    pub config: IntegrationConfig<T>,
    pub stats: IntegrationStats<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn alphas(&self) -> Vec<Complex<T>> {
        self.samples.iter().map(|s| s.alpha).collect()
    }

    pub fn last(&self) -> Option<&Sample<T>> {
        self.samples.last()
    }
}

/// Advances `state` by one RK4 step of length `dt`, then re-Hermitizes and
/// renormalizes the density matrix. Returns the new state and the trace
/// deviation removed by the renormalization.
pub fn step_mean_field<T: Real>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    state: &MeanFieldState<T>,
    dt: T,
) -> Result<(MeanFieldState<T>, T)> {
    let y = StateVector::from_state(state);
    let next = step_rk4(
        |t, y: &StateVector<T>| {
            rhs(model, mode, params, &MeanFieldState::new(y.alpha, AtomState { rho: y.rho }, t))
        },
        &y,
        state.t,
        dt,
    )?;
    let t = state.t + dt;
    if !next.is_finite() {
        return Err(Error::NumericalFailure { t: t.as_f64(), what: "state became non-finite".into() });
    }
    let rho = next.rho.hermitian_part();
    let tr = rho.trace().re;
    let rho = rho * (T::one() / tr);
    let atom = AtomState { rho };
    let alpha = match mode {
        DissipatorMode::EffectiveSpin => effective_photon_amplitude(params, &atom.bloch(), t),
        _ => next.alpha,
    };
    Ok((MeanFieldState::new(alpha, atom, t), (tr - T::one()).abs()))
}

fn sample_of<T: Real>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    s: &MeanFieldState<T>,
) -> Sample<T> {
    let (sigma, rate_l) = reported_frame(model, mode, params, s.alpha);
    Sample { t: s.t, alpha: s.alpha, m: s.bloch(), sigma, rate_l }
}

/// Integrates from `initial` (after applying the configured perturbation) to
/// `config.t_end`, handing every recorded sample to `on_sample`. Returns the
/// final state and step diagnostics. Step times are `t0 + k·dt`, computed
/// without accumulation.
pub fn integrate_with<T: Real, F: FnMut(&Sample<T>)>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    initial: &MeanFieldState<T>,
    config: &IntegrationConfig<T>,
    mut on_sample: F,
) -> Result<(MeanFieldState<T>, IntegrationStats<T>)> {
    params.validate()?;
    config.validate(params)?;
    initial.validate()?;
    if mode == DissipatorMode::EffectiveSpin {
        // surfaces model/kappa errors before any work
        rhs(model, mode, params, initial)?;
    }
    let mut state = initial.perturbed(config.perturbation);
    if mode == DissipatorMode::EffectiveSpin {
        state.alpha = effective_photon_amplitude(params, &state.bloch(), state.t);
    }
    let t0 = state.t;
    let steps = config.steps_from(t0);
    let mut stats = IntegrationStats::new(&state);
    on_sample(&sample_of(model, mode, params, &state));
    for k in 0..steps {
        let dt = config.dt;
        let (mut next, dev) = step_mean_field(model, mode, params, &state, dt)?;
        next.t = t0 + T::from_usize(k + 1).unwrap() * dt;
        stats.record(&next, dev);
        state = next;
        if (k + 1) % config.sample_stride == 0 || k + 1 == steps {
            on_sample(&sample_of(model, mode, params, &state));
        }
    }
    Ok((state, stats))
}

/// Collects the full trajectory of [`integrate_with`].
pub fn integrate<T: Real>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    initial: &MeanFieldState<T>,
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T>> {
    let mut samples = Vec::with_capacity(config.steps_from(initial.t) / config.sample_stride.max(1) + 2);
    let (_, stats) = integrate_with(model, mode, params, initial, config, |s| samples.push(*s))?;
    Ok(Trajectory { samples, model, mode, params: *params, config: *config, stats })
}
