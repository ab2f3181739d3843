//! Physical parameters, mean-field states and the instantaneous dressed frame.
//!
//! All quantities are in units with ħ = 1. The photon amplitude is the scaled
//! coherent amplitude `α = ⟨a⟩/√N` and the atomic state is the density matrix
//! shared by every atom, so `N` never appears explicitly.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm3, Mat2, Vec3};
use crate::scalar::Real;

/// Which light–matter coupling is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Full `S^x (a + a†)` coupling.
    Dicke,
    /// Rotating-wave coupling `S^+ a + S^- a†`.
    #[serde(rename = "tc", alias = "tavis_cummings")]
    TavisCummings,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dicke => "dicke",
            Self::TavisCummings => "tc",
        })
    }
}

/// How dissipation enters the equations of motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DissipatorMode {
    /// Jump operators of the instantaneous mean-field eigenbasis with
    /// state-dependent rates.
    Dressed,
    /// Bare photon and spin-lowering operators with constant rates.
    Bare,
    /// Dissipation-free Dicke spin dynamics with the photon eliminated to
    /// first order in `g`.
    EffectiveSpin,
}

impl fmt::Display for DissipatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dressed => "dressed",
            Self::Bare => "bare",
            Self::EffectiveSpin => "effective_spin",
        })
    }
}

/// Sign of the superradiant photon amplitude selected by [`ground_state`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

impl Branch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Self::Positive => T::one(),
            Self::Negative => -T::one(),
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Self::Positive),
            -1 => Ok(Self::Negative),
            other => Err(format!("branch must be +1 or -1, got {other}")),
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Positive => 1,
            Branch::Negative => -1,
        }
    }
}

/// Physical constants of one simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams<T = f64> {
    /// Photon angular frequency.
    pub omega_p: T,
    /// Atomic transition angular frequency.
    pub omega_a: T,
    /// Drive angular frequency.
    pub omega_e: T,
    /// Atom–photon coupling.
    pub g: T,
    /// Drive amplitude.
    pub xi: T,
    /// Photon decay rate.
    pub kappa: T,
    /// Base rate of the bath coupled to each atom separately.
    pub gamma_l: T,
    /// Base rate of the bath coupled to all atoms collectively.
    pub gamma_g: T,
}

impl<T: Real> Default for SystemParams<T> {
    fn default() -> Self {
        Self {
            omega_p: T::one(),
            omega_a: T::one(),
            omega_e: T::one(),
            g: T::zero(),
            xi: T::zero(),
            kappa: T::lit(0.1),
            gamma_l: T::lit(0.1),
            gamma_g: T::zero(),
        }
    }
}

impl<T: Real> SystemParams<T> {
    pub fn with_g(mut self, g: T) -> Self {
        self.g = g;
        self
    }

    pub fn with_xi(mut self, xi: T) -> Self {
        self.xi = xi;
        self
    }

    pub fn with_kappa(mut self, kappa: T) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_gammas(mut self, gamma_l: T, gamma_g: T) -> Self {
        self.gamma_l = gamma_l;
        self.gamma_g = gamma_g;
        self
    }

    /// Drive period `2π/ω_e`.
    pub fn drive_period(&self) -> T {
        T::TAU() / self.omega_e
    }

    /// Critical coupling of the equilibrium superradiant transition.
    pub fn critical_coupling(&self, model: ModelKind) -> T {
        let base = (self.omega_a * self.omega_p).sqrt();
        match model {
            ModelKind::Dicke => base * T::lit(0.5),
            ModelKind::TavisCummings => base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_p", self.omega_p),
            ("omega_a", self.omega_a),
            ("omega_e", self.omega_e),
            ("g", self.g),
            ("xi", self.xi),
            ("kappa", self.kappa),
            ("gamma_l", self.gamma_l),
            ("gamma_g", self.gamma_g),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in &fields[..3] {
            if *v <= T::zero() {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in &fields[3..] {
            if *v < T::zero() {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Density matrix of a single atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomState<T = f64> {
    pub rho: Mat2<T>,
}

impl<T: Real> AtomState<T> {
    /// `ρ = 1/2 + m·σ`; requires `|m| ≤ 1/2`.
    pub fn from_bloch(m: Vec3<T>) -> Result<Self> {
        if !m.iter().all(|c| c.is_finite()) || norm3(&m) > T::lit(0.5 + 1e-9) {
            return Err(Error::InvalidParams(format!(
                "Bloch vector {m:?} outside the ball |m| <= 1/2"
            )));
        }
        Ok(Self::from_bloch_unchecked(m))
    }

    pub(crate) fn from_bloch_unchecked(m: Vec3<T>) -> Self {
        let h = T::lit(0.5);
        Self {
            rho: Mat2::new(
                Complex::new(h + m[2], T::zero()),
                Complex::new(m[0], -m[1]),
                Complex::new(m[0], m[1]),
                Complex::new(h - m[2], T::zero()),
            ),
        }
    }

    /// Pure state `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &[Complex<T>; 2]) -> Self {
        Self { rho: Mat2::outer(ket, ket) }
    }

    /// Both atomic levels in the lower state, `m = (0, 0, -1/2)`.
    pub fn spin_down() -> Self {
        Self::from_bloch_unchecked([T::zero(), T::zero(), T::lit(-0.5)])
    }

    /// `m^a = Tr(S^a ρ)`.
    pub fn bloch(&self) -> Vec3<T> {
        let r = &self.rho.m;
        [r[0][1].re, -r[0][1].im, T::lit(0.5) * (r[0][0].re - r[1][1].re)]
    }

    pub fn trace(&self) -> T {
        self.rho.trace().re
    }

    pub fn min_eigenvalue(&self) -> T {
        let r = &self.rho.m;
        let half = T::lit(0.5);
        let mean = half * (r[0][0].re + r[1][1].re);
        let diff = half * (r[0][0].re - r[1][1].re);
        let off = r[0][1].norm();
        mean - (diff * diff + off * off).sqrt()
    }

    /// Checks unit trace and positivity to the tolerances used throughout.
    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_finite() {
            return Err(Error::InvalidParams("density matrix is not finite".into()));
        }
        let tr = self.trace();
        if (tr - T::one()).abs() >= T::lit(1e-9) {
            return Err(Error::InvalidParams(format!("Tr rho = {tr}, expected 1")));
        }
        let lam = self.min_eigenvalue();
        if lam < T::lit(-1e-9) {
            return Err(Error::InvalidParams(format!("rho has negative eigenvalue {lam}")));
        }
        Ok(())
    }
}

/// Scaled photon amplitude, atomic density matrix and time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanFieldState<T = f64> {
    pub alpha: Complex<T>,
    pub atom: AtomState<T>,
    pub t: T,
}

impl<T: Real> MeanFieldState<T> {
    pub fn new(alpha: Complex<T>, atom: AtomState<T>, t: T) -> Self {
        Self { alpha, atom, t }
    }

    /// Empty cavity and atoms in the lower level at `t = 0`.
    pub fn vacuum() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), AtomState::spin_down(), T::zero())
    }

    pub fn bloch(&self) -> Vec3<T> {
        self.atom.bloch()
    }

    /// Adds `eps` to `m^x`, then rescales the Bloch vector back to its
    /// original length so a pure state stays pure.
    pub fn perturbed(&self, eps: T) -> Self {
        if eps == T::zero() {
            return *self;
        }
        let m = self.bloch();
        let len = norm3(&m);
        let mut p = [m[0] + eps, m[1], m[2]];
        let plen = norm3(&p);
        if len > T::zero() && plen > T::zero() {
            let s = len / plen;
            p = [p[0] * s, p[1] * s, p[2] * s];
        }
        Self { atom: AtomState::from_bloch_unchecked(p), ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return Err(Error::InvalidParams("photon amplitude is not finite".into()));
        }
        self.atom.validate()
    }
}

/// Instantaneous eigenbasis of the mean-field atom Hamiltonian and the
/// dissipation rates it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedFrame<T = f64> {
    /// Half the splitting of the mean-field atom Hamiltonian.
    pub sigma: T,
    pub ground_ket: [Complex<T>; 2],
    pub excited_ket: [Complex<T>; 2],
    /// `|⟨−̃|S^x|+̃⟩|²`.
    pub sx_element_sq: T,
    pub rate_l: T,
    pub rate_g: T,
}

impl<T: Real> DressedFrame<T> {
    /// Dressed lowering operator `|−̃⟩⟨+̃|`.
    pub fn lowering(&self) -> Mat2<T> {
        Mat2::outer(&self.ground_ket, &self.excited_ket)
    }

    pub fn ground_projector(&self) -> Mat2<T> {
        Mat2::outer(&self.ground_ket, &self.ground_ket)
    }
}

/// Effective magnetic field `B` of the mean-field atom Hamiltonian `B·S`.
pub fn mf_atom_field<T: Real>(model: ModelKind, params: &SystemParams<T>, alpha: Complex<T>) -> Vec3<T> {
    match model {
        ModelKind::Dicke => [T::lit(4.0) * params.g * alpha.re, T::zero(), params.omega_a],
        ModelKind::TavisCummings => {
            let two_g = T::lit(2.0) * params.g;
            [two_g * alpha.re, -two_g * alpha.im, params.omega_a]
        }
    }
}

/// Makes the first non-negligible component real and non-negative.
fn fix_phase<T: Real>(v: [Complex<T>; 2]) -> [Complex<T>; 2] {
    let tiny = T::epsilon();
    let lead = if v[0].norm() > tiny { v[0] } else { v[1] };
    let r = lead.norm();
    if r == T::zero() {
        return v;
    }
    let phase = lead.conj() / r;
    let mut out = [v[0] * phase, v[1] * phase];
    let k = if v[0].norm() > tiny { 0 } else { 1 };
    out[k] = Complex::new(r, T::zero());
    out
}

/// Eigenpair of `B·S` for an effective field `b` with nonzero norm.
pub(crate) fn frame_from_field<T: Real>(b: &Vec3<T>, gamma_l: T, gamma_g: T) -> DressedFrame<T> {
    let len = norm3(b);
    let raw = if b[2] >= T::zero() {
        [Complex::new(len + b[2], T::zero()), Complex::new(b[0], b[1])]
    } else {
        [Complex::new(b[0], -b[1]), Complex::new(len - b[2], T::zero())]
    };
    let nrm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    let excited = fix_phase([raw[0] / nrm, raw[1] / nrm]);
    let ground = fix_phase([-excited[1].conj(), excited[0].conj()]);

    let half = T::lit(0.5);
    let sx = (ground[0].conj() * excited[1] + ground[1].conj() * excited[0]) * half;
    let sx_element_sq = sx.norm_sqr();
    let four = T::lit(4.0);
    DressedFrame {
        sigma: half * len,
        ground_ket: ground,
        excited_ket: excited,
        sx_element_sq,
        rate_l: four * sx_element_sq * gamma_l,
        rate_g: four * sx_element_sq * gamma_g,
    }
}

/// Diagonalizes the mean-field atom Hamiltonian for the given photon amplitude.
pub fn dressed_frame<T: Real>(model: ModelKind, params: &SystemParams<T>, alpha: Complex<T>) -> DressedFrame<T> {
    let b = mf_atom_field(model, params, alpha);
    frame_from_field(&b, params.gamma_l, params.gamma_g)
}

/// Stationary state without drive, used as the initial condition of every
/// driven run. Above the critical coupling the superradiant solution with
/// `sign(α) = branch` is returned.
pub fn ground_state<T: Real>(model: ModelKind, params: &SystemParams<T>, branch: Branch) -> Result<MeanFieldState<T>> {
    params.validate()?;
    if params.xi != T::zero() {
        return Err(Error::InvalidParams(format!(
            "ground state requires xi = 0, got {}",
            params.xi
        )));
    }
    let g = params.g;
    if g <= params.critical_coupling(model) {
        return Ok(MeanFieldState::vacuum());
    }
    let (wp, wa) = (params.omega_p, params.omega_a);
    let quarter = T::lit(0.25);
    let magnitude = match model {
        ModelKind::Dicke => {
            let four_g2 = T::lit(4.0) * g * g;
            T::lit(0.5) * (four_g2 / (wp * wp) - wa * wa / four_g2).max(T::zero()).sqrt()
        }
        ModelKind::TavisCummings => {
            let mz = -wa * wp / (T::lit(2.0) * g * g);
            (g / wp) * (quarter - mz * mz).max(T::zero()).sqrt()
        }
    };
    let alpha = Complex::new(branch.sign::<T>() * magnitude, T::zero());
    let frame = dressed_frame(model, params, alpha);
    Ok(MeanFieldState::new(alpha, AtomState::pure(&frame.ground_ket), T::zero()))
}

/// The Z2 map `a → −a`, `S^{x,y} → −S^{x,y}`.
pub fn z2_map<T: Real>(state: &MeanFieldState<T>) -> MeanFieldState<T> {
    let mut rho = state.atom.rho;
    rho.m[0][1] = -rho.m[0][1];
    rho.m[1][0] = -rho.m[1][0];
    MeanFieldState::new(-state.alpha, AtomState { rho }, state.t)
}
