//! Mean-field simulator for the driven, dissipative Dicke and Tavis–Cummings
//! cavity models in the thermodynamic limit.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the sweep
//! engine and the command-line tool use.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod sweep;

pub use analysis::{
    analyze, bessel_j0, bessel_j0_zeros, cdt_amplitudes, classify, order_parameters, period_averages,
    period_averages_of, OrderParameters, PeriodAverages, PhaseLabel, Thresholds,
};
pub use dynamics::{
    integrate, integrate_with, rhs, rhs_bare, rhs_dressed, rhs_effective_spin, step_mean_field, step_rk4,
    IntegrationConfig, IntegrationStats, Sample, StateVector, Trajectory,
};
pub use error::{Error, Result};
pub use linalg::{Mat2, Vec3};
pub use model::{
    dressed_frame, ground_state, mf_atom_field, z2_map, AtomState, Branch, DissipatorMode, DressedFrame,
    MeanFieldState, ModelKind, SystemParams,
};
pub use scalar::Real;

pub type SystemParams64 = SystemParams<f64>;
pub type SystemParams32 = SystemParams<f32>;
pub type MeanFieldState64 = MeanFieldState<f64>;
pub type MeanFieldState32 = MeanFieldState<f32>;
pub type AtomState64 = AtomState<f64>;
pub type DressedFrame64 = DressedFrame<f64>;
pub type IntegrationConfig64 = IntegrationConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type Trajectory32 = Trajectory<f32>;
pub type OrderParameters64 = OrderParameters<f64>;
pub type Thresholds64 = Thresholds<f64>;
