//! Minimal dense 2×2 complex matrices and 3-vectors for the single-atom sector.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

/// Real 3-vector (Bloch vectors and effective fields).
pub type Vec3<T> = [T; 3];

pub(crate) fn norm3<T: Real>(v: &Vec3<T>) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn cross3<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Dense 2×2 complex matrix, row-major. Index 0 is the spin-up (`S^z = +1/2`)
/// state, index 1 spin-down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn zeros() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        let o = Complex::new(T::one(), T::zero());
        Self::new(o, z, z, o)
    }

    /// `B·S` with `S = σ/2`.
    pub fn spin_field(b: &Vec3<T>) -> Self {
        let h = T::lit(0.5);
        Self::new(
            Complex::new(h * b[2], T::zero()),
            Complex::new(h * b[0], -h * b[1]),
            Complex::new(h * b[0], h * b[1]),
            Complex::new(-h * b[2], T::zero()),
        )
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>; 2], v: &[Complex<T>; 2]) -> Self {
        Self::new(
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        )
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_re(&self, s: T) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(T::lit(0.5))
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[Complex<T>; 2], v: &[Complex<T>; 2]) -> Complex<T> {
        let m = &self.m;
        let av0 = m[0][0] * v[0] + m[0][1] * v[1];
        let av1 = m[1][0] * v[0] + m[1][1] * v[1];
        u[0].conj() * av0 + u[1].conj() * av1
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl<T: Real> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-T::one())
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl<T: Real> Mul<T> for Mat2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale_re(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn spin_field_matches_pauli_combination() {
        let b = [0.3, -1.2, 0.7];
        let h = Mat2::spin_field(&b);
        let i = C::new(0.0, 1.0);
        let sx = Mat2::new(C::new(0.0, 0.0), C::new(0.5, 0.0), C::new(0.5, 0.0), C::new(0.0, 0.0));
        let sy = Mat2::new(C::new(0.0, 0.0), -i * 0.5, i * 0.5, C::new(0.0, 0.0));
        let sz = Mat2::new(C::new(0.5, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-0.5, 0.0));
        let expect = sx * b[0] + sy * b[1] + sz * b[2];
        assert!((h - expect).max_abs() < 1e-15);
    }

    #[test]
    fn adjoint_and_products() {
        let a = Mat2::new(C::new(1.0, 2.0), C::new(0.0, -1.0), C::new(3.0, 0.5), C::new(-2.0, 0.0));
        let b = Mat2::new(C::new(0.5, 0.0), C::new(1.0, 1.0), C::new(0.0, 2.0), C::new(1.0, -1.0));
        assert!(((a * b).adjoint() - b.adjoint() * a.adjoint()).max_abs() < 1e-14);
        assert!((a.commutator(&b) + b.commutator(&a)).max_abs() < 1e-14);
        assert!(a.commutator(&b).trace().norm() < 1e-14);
    }

    #[test]
    fn cross_product_orientation() {
        assert_eq!(cross3(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), [0.0, 0.0, 1.0]);
    }
}
