//! Right-hand sides of the mean-field equations of motion.

use std::ops::{Add, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{cross3, Mat2, Vec3};
use crate::model::{
    dressed_frame, mf_atom_field, DissipatorMode, MeanFieldState, ModelKind, SystemParams,
};
use crate::scalar::Real;

/// Flat representation of the coupled state (photon amplitude plus atomic
/// density matrix), also used for its time derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector<T = f64> {
    pub alpha: Complex<T>,
    pub rho: Mat2<T>,
}

impl<T: Real> StateVector<T> {
    pub fn from_state(s: &MeanFieldState<T>) -> Self {
        Self { alpha: s.alpha, rho: s.atom.rho }
    }

    /// Bloch vector (or its rate, for a derivative) encoded in `rho`.
    pub fn bloch(&self) -> Vec3<T> {
        let r = &self.rho.m;
        [r[0][1].re, -r[0][1].im, T::lit(0.5) * (r[0][0].re - r[1][1].re)]
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.re.is_finite() && self.alpha.im.is_finite() && self.rho.is_finite()
    }

    pub fn norm(&self) -> T {
        let r = &self.rho.m;
        let sq = self.alpha.norm_sqr()
            + r.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        sq.sqrt()
    }
}

impl<T: Real> Add for StateVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { alpha: self.alpha + o.alpha, rho: self.rho + o.rho }
    }
}

impl<T: Real> Mul<T> for StateVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self { alpha: self.alpha * s, rho: self.rho * s }
    }
}

/// `dρ` for `ρ = 1/2 + m·σ` moving with `dm`.
fn bloch_to_rho_rate<T: Real>(dm: &Vec3<T>) -> Mat2<T> {
    Mat2::new(
        Complex::new(dm[2], T::zero()),
        Complex::new(dm[0], -dm[1]),
        Complex::new(dm[0], dm[1]),
        Complex::new(-dm[2], T::zero()),
    )
}

/// `−i[H, ρ] + Γ_L(2LρL† − {L†L, ρ}) + Γ_G(⟨L⟩[ρ, L†] + ⟨L†⟩[L, ρ])`.
pub(crate) fn atom_generator<T: Real>(
    h: &Mat2<T>,
    rho: &Mat2<T>,
    lower: &Mat2<T>,
    rate_l: T,
    rate_g: T,
) -> Mat2<T> {
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut out = h.commutator(rho).scale(minus_i);
    let raise = lower.adjoint();
    if rate_l != T::zero() {
        let jump = (*lower * *rho * raise) * T::lit(2.0);
        let anti = (raise * *lower).anticommutator(rho);
        out = out + (jump - anti) * rate_l;
    }
    if rate_g != T::zero() {
        let l_mean = (*lower * *rho).trace();
        let term = rho.commutator(&raise).scale(l_mean) + lower.commutator(rho).scale(l_mean.conj());
        out = out + term * rate_g;
    }
    out
}

fn drive<T: Real>(params: &SystemParams<T>, t: T) -> T {
    params.xi * (params.omega_e * t).cos()
}

fn check<T: Real>(d: StateVector<T>, t: T, what: &str) -> Result<StateVector<T>> {
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NumericalFailure { t: t.as_f64(), what: format!("non-finite {what} derivative") })
    }
}

/// Dressed-frame equations: both photon and atom relax toward the
/// instantaneous mean-field eigenstates.
pub fn rhs_dressed<T: Real>(
    model: ModelKind,
    params: &SystemParams<T>,
    state: &MeanFieldState<T>,
) -> Result<StateVector<T>> {
    let m = state.bloch();
    let rho = &state.atom.rho;
    let pref = Complex::new(-params.kappa, -params.omega_p);
    let f = drive(params, state.t);
    let shift = match model {
        ModelKind::Dicke => Complex::new(T::lit(2.0) * (params.g * m[0] + f) / params.omega_p, T::zero()),
        ModelKind::TavisCummings => {
            Complex::new(params.g * m[0] + T::lit(2.0) * f, -params.g * m[1]) / params.omega_p
        }
    };
    let d_alpha = pref * (state.alpha + shift);

    let b = mf_atom_field(model, params, state.alpha);
    let frame = crate::model::frame_from_field(&b, params.gamma_l, params.gamma_g);
    let h = Mat2::spin_field(&b);
    let d_rho = atom_generator(&h, rho, &frame.lowering(), frame.rate_l, frame.rate_g);
    check(StateVector { alpha: d_alpha, rho: d_rho }, state.t, "dressed")
}

/// Bare-operator equations with constant rates.
pub fn rhs_bare<T: Real>(
    model: ModelKind,
    params: &SystemParams<T>,
    state: &MeanFieldState<T>,
) -> Result<StateVector<T>> {
    let m = state.bloch();
    let rho = &state.atom.rho;
    let free = Complex::new(-params.kappa, -params.omega_p) * state.alpha;
    let f = drive(params, state.t);
    let two = T::lit(2.0);
    // −i × (coupling source)
    let source = match model {
        ModelKind::Dicke => Complex::new(T::zero(), -two * (params.g * m[0] + f)),
        ModelKind::TavisCummings => {
            Complex::new(-params.g * m[1], -(params.g * m[0] + two * f))
        }
    };
    let d_alpha = free + source;

    let b = mf_atom_field(model, params, state.alpha);
    let h = Mat2::spin_field(&b);
    let z = Complex::new(T::zero(), T::zero());
    let lower = Mat2::new(z, z, Complex::new(T::one(), T::zero()), z);
    let d_rho = atom_generator(&h, rho, &lower, params.gamma_l, params.gamma_g);
    check(StateVector { alpha: d_alpha, rho: d_rho }, state.t, "bare")
}

/// Field seen by each spin after eliminating the photon to first order in `g`.
pub fn effective_spin_field<T: Real>(params: &SystemParams<T>, m: &Vec3<T>, t: T) -> Vec3<T> {
    let drive = if params.xi == T::zero() {
        T::zero()
    } else {
        T::lit(4.0) * params.g * params.xi / params.kappa * (params.omega_e * t).sin()
    };
    let interaction = T::lit(8.0) * params.g * params.g / params.omega_p * m[0];
    [-drive - interaction, T::zero(), params.omega_a]
}

/// `dm/dt = B_eff × m` of the effective Dicke spin model.
pub fn rhs_effective_spin<T: Real>(
    model: ModelKind,
    params: &SystemParams<T>,
    m: &Vec3<T>,
    t: T,
) -> Result<Vec3<T>> {
    if model != ModelKind::Dicke {
        return Err(Error::InvalidParams("the effective spin model is defined for the Dicke model only".into()));
    }
    if params.xi != T::zero() && params.kappa == T::zero() {
        return Err(Error::InvalidParams("the effective spin model needs kappa > 0 when driven".into()));
    }
    let b = effective_spin_field(params, m, t);
    let dm = cross3(&b, m);
    if dm.iter().all(|c| c.is_finite()) {
        Ok(dm)
    } else {
        Err(Error::NumericalFailure { t: t.as_f64(), what: "non-finite effective spin derivative".into() })
    }
}

/// Photon amplitude implied by the effective spin model: the zeroth-order
/// driven response plus the first-order atomic polarization term.
pub fn effective_photon_amplitude<T: Real>(params: &SystemParams<T>, m: &Vec3<T>, t: T) -> Complex<T> {
    let first = Complex::new(-T::lit(2.0) * params.g / params.omega_p * m[0], T::zero());
    if params.xi == T::zero() {
        return first;
    }
    let phase = Complex::from_polar(T::one(), -params.omega_e * t);
    Complex::new(T::zero(), -params.xi / params.kappa) * phase + first
}

/// Dispatches to the right-hand side of `mode`. In effective-spin mode the
/// photon amplitude is slaved to the spins, so its entry in the returned
/// derivative is zero.
pub fn rhs<T: Real>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    state: &MeanFieldState<T>,
) -> Result<StateVector<T>> {
    match mode {
        DissipatorMode::Dressed => rhs_dressed(model, params, state),
        DissipatorMode::Bare => rhs_bare(model, params, state),
        DissipatorMode::EffectiveSpin => {
            let dm = rhs_effective_spin(model, params, &state.bloch(), state.t)?;
            Ok(StateVector { alpha: Complex::new(T::zero(), T::zero()), rho: bloch_to_rho_rate(&dm) })
        }
    }
}

/// Instantaneous `(σ, Γ_L)` reported alongside each trajectory sample.
pub(crate) fn reported_frame<T: Real>(
    model: ModelKind,
    mode: DissipatorMode,
    params: &SystemParams<T>,
    alpha: Complex<T>,
) -> (T, T) {
    let frame = dressed_frame(model, params, alpha);
    let rate = match mode {
        DissipatorMode::Dressed => frame.rate_l,
        DissipatorMode::Bare => params.gamma_l,
        DissipatorMode::EffectiveSpin => T::zero(),
    };
    (frame.sigma, rate)
}
