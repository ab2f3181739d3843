//! Equations of motion and their fixed-step integration.

mod integrate;
mod rhs;
mod rk4;

pub use integrate::{
    integrate, integrate_with, step_mean_field, IntegrationConfig, IntegrationStats, Sample, Trajectory,
};
pub use rhs::{
    effective_photon_amplitude, effective_spin_field, rhs, rhs_bare, rhs_dressed, rhs_effective_spin,
    StateVector,
};
pub use rk4::step_rk4;
