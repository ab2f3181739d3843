use std::ops::{Add, Mul};

use crate::scalar::Real;

/// One classical fourth-order Runge–Kutta step of `dy/dt = f(t, y)`.
///
/// `Y` is any vector-like value closed under addition and real scaling.
pub fn step_rk4<T, Y, E, F>(mut f: F, y: &Y, t: T, dt: T) -> Result<Y, E>
where
    T: Real,
    Y: Clone + Add<Output = Y> + Mul<T, Output = Y>,
    F: FnMut(T, &Y) -> Result<Y, E>,
{
    if dt == T::zero() {
        return Ok(y.clone());
    }
    let half = dt * T::lit(0.5);
    let k1 = f(t, y)?;
    let k2 = f(t + half, &(y.clone() + k1.clone() * half))?;
    let k3 = f(t + half, &(y.clone() + k2.clone() * half))?;
    let k4 = f(t + dt, &(y.clone() + k3.clone() * dt))?;
    let sixth = dt / T::lit(6.0);
    let two = T::lit(2.0);
    Ok(y.clone() + (k1 + k2 * two + k3 * two + k4) * sixth)
}
