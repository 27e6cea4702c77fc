//! Quaternion arithmetic and the `x + yI` slice coordinates.
//!
//! A quaternion `q = w + xi + yj + zk` is stored by value in four `f64`
//! components. Every non-real quaternion lies on exactly one complex slice
//! `L_I = R + IR` with `I` a unit of the imaginary sphere `S`; [`decompose`]
//! recovers that coordinate system.

mod literal;
mod sample;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use sample::{random_unit, sample_sphere_units};

/// Tolerance used to accept a quaternion as a member of the unit sphere `S`.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Quaternion with zero real part and the given imaginary 3-vector.
    pub const fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn imag(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// The imaginary part as a quaternion.
    pub fn imag_part(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn imag_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    pub fn inverse(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    pub fn scale(&self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Euclidean inner product on R⁴.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `self⁻¹ · q · self`, the rotation of `q` by conjugation.
    pub fn conjugate_by(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.inverse()? * q * *self)
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    pub fn dist(&self, other: &Quaternion) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, r: Quaternion) {
        *self = *self + r;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, r: Quaternion) {
        *self = *self - r;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        let (a, b) = (self, r);
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, r: Quaternion) {
        *self = *self * r;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<It: Iterator<Item = Quaternion>>(iter: It) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().map(JsonNumber).serialize(s)
    }
}

/// Serializes integral values without a fractional part (`0` rather than
/// `0.0`); everything else uses the shortest round-trip representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsonNumber(pub f64);

impl Serialize for JsonNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        let negative_zero = v == 0.0 && v.is_sign_negative();
        if v.fract() == 0.0 && v.abs() < 1e15 && !negative_zero {
            s.serialize_i64(v as i64)
        } else {
            s.serialize_f64(v)
        }
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let a = <[f64; 4]>::deserialize(d)?;
        let q = Quaternion::from_array(a);
        if !q.is_finite() {
            return Err(serde::de::Error::custom(
                "quaternion components must be finite",
            ));
        }
        Ok(q)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&literal::format_literal(self))
    }
}

impl std::str::FromStr for Quaternion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        literal::parse_literal(s)
    }
}

/// A quaternion `u` with zero real part and unit norm, so that `u² = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit(Quaternion::I);
    pub const J: ImaginaryUnit = ImaginaryUnit(Quaternion::J);
    pub const K: ImaginaryUnit = ImaginaryUnit(Quaternion::K);

    /// Accepts `u` only if it already satisfies the unit-sphere invariants
    /// within [`UNIT_TOL`].
    pub fn new(u: Quaternion) -> Result<Self> {
        Self::with_tolerance(u, UNIT_TOL)
    }

    /// Accepts `u` when `|Re u|` and `||u| - 1|` are both within `tol`, then
    /// projects it exactly onto the sphere.
    pub fn with_tolerance(u: Quaternion, tol: f64) -> Result<Self> {
        if !u.is_finite() || u.w.abs() > tol || (u.norm() - 1.0).abs() > tol {
            return Err(Error::NotImaginaryUnit(u));
        }
        Self::normalize(u.imag())
    }

    /// Normalizes a nonzero 3-vector onto the sphere.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let q = Quaternion::pure(v);
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotImaginaryUnit(q));
        }
        Ok(ImaginaryUnit(q / n))
    }

    pub fn quat(&self) -> Quaternion {
        self.0
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0.imag()
    }

    /// Inner product of the imaginary 3-vectors.
    pub fn dot(&self, other: &ImaginaryUnit) -> f64 {
        self.0.dot(&other.0)
    }

    /// The point `x + y·self` of the slice `L_self`.
    pub fn point(&self, x: f64, y: f64) -> Quaternion {
        Quaternion::new(x, y * self.0.x, y * self.0.y, y * self.0.z)
    }
}

impl Neg for ImaginaryUnit {
    type Output = ImaginaryUnit;
    fn neg(self) -> ImaginaryUnit {
        ImaginaryUnit(-self.0)
    }
}

impl From<ImaginaryUnit> for Quaternion {
    fn from(u: ImaginaryUnit) -> Quaternion {
        u.0
    }
}

/// Which slice a point lies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceUnit {
    /// The point is real and lies on every slice.
    RealAxis,
    Unit(ImaginaryUnit),
}

/// Coordinates `q = x + y·I` with `y ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCoords {
    pub x: f64,
    pub y: f64,
    pub unit: SliceUnit,
}

impl SliceCoords {
    pub fn reconstruct(&self) -> Quaternion {
        match self.unit {
            SliceUnit::RealAxis => Quaternion::real(self.x),
            SliceUnit::Unit(u) => u.point(self.x, self.y),
        }
    }

    /// The unit, or `fallback` for real points.
    pub fn unit_or(&self, fallback: ImaginaryUnit) -> ImaginaryUnit {
        match self.unit {
            SliceUnit::RealAxis => fallback,
            SliceUnit::Unit(u) => u,
        }
    }
}

pub fn decompose(q: Quaternion) -> SliceCoords {
    let y = q.imag_norm();
    if y == 0.0 {
        return SliceCoords {
            x: q.w,
            y: 0.0,
            unit: SliceUnit::RealAxis,
        };
    }
    let v = q.imag();
    let unit = ImaginaryUnit(Quaternion::pure([v[0] / y, v[1] / y, v[2] / y]));
    SliceCoords {
        x: q.w,
        y,
        unit: SliceUnit::Unit(unit),
    }
}

/// Returns `(q̄, |q|, q⁻¹)`.
pub fn conj_norm_inv(q: Quaternion) -> Result<(Quaternion, f64, Quaternion)> {
    Ok((q.conj(), q.norm(), q.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    // Left-multiplication matrix of a quaternion; an independent route to the
    // Hamilton product.
    fn left_matrix(a: Quaternion) -> [[f64; 4]; 4] {
        [
            [a.w, -a.x, -a.y, -a.z],
            [a.x, a.w, -a.z, a.y],
            [a.y, a.z, a.w, -a.x],
            [a.z, -a.y, a.x, a.w],
        ]
    }

    fn matrix_mul(a: Quaternion, b: Quaternion) -> Quaternion {
        let m = left_matrix(a);
        let v = b.to_array();
        let mut out = [0.0; 4];
        for (r, row) in m.iter().enumerate() {
            out[r] = row.iter().zip(v.iter()).map(|(p, q)| p * q).sum();
        }
        Quaternion::from_array(out)
    }

    #[test]
    fn unit_relations() {
        assert_eq!(I * J, K);
        assert_eq!(J * I, -K);
        assert_eq!(J * K, I);
        assert_eq!(K * J, -I);
        assert_eq!(K * I, J);
        assert_eq!(I * K, -J);
        for u in [I, J, K] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
    }

    #[test]
    fn product_matches_matrix_form() {
        let a = Quaternion::new(0.3, -1.2, 2.5, 0.7);
        let b = Quaternion::new(-0.9, 0.4, 0.1, -2.2);
        assert!((a * b).max_abs_diff(&matrix_mul(a, b)) < 1e-15);
        let q = Quaternion::new(1.5, 2.0, -3.0, 4.0);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn conj_norm_inv_examples() {
        let (_, n, inv) = conj_norm_inv(Quaternion::new(0.0, 2.0, 0.0, 0.0)).unwrap();
        assert_eq!(n, 2.0);
        assert_eq!(inv, Quaternion::new(0.0, -0.5, 0.0, 0.0));

        let (c, n, inv) = conj_norm_inv(Quaternion::ONE).unwrap();
        assert_eq!((c, n, inv), (Quaternion::ONE, 1.0, Quaternion::ONE));

        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let (c, n, inv) = conj_norm_inv(q).unwrap();
        assert_eq!(n, 2.0);
        assert_eq!(c.norm(), n);
        assert_eq!(inv, Quaternion::new(0.25, -0.25, -0.25, -0.25));
        assert!((matrix_mul(q, inv)).max_abs_diff(&Quaternion::ONE) < 1e-15);

        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn decompose_examples() {
        let c = decompose(Quaternion::new(1.0, 0.0, 3.0, 0.0));
        assert_eq!((c.x, c.y), (1.0, 3.0));
        assert_eq!(c.unit, SliceUnit::Unit(ImaginaryUnit::J));

        let c = decompose(Quaternion::real(5.0));
        assert_eq!((c.x, c.y, c.unit), (5.0, 0.0, SliceUnit::RealAxis));

        let q = Quaternion::new(1.0, 1.0, 1.0, 0.0);
        let c = decompose(q);
        assert_eq!(c.x, 1.0);
        assert!((c.y - 2f64.sqrt()).abs() < 1e-15);
        let SliceUnit::Unit(u) = c.unit else {
            panic!("expected a unit")
        };
        let s = 1.0 / 2f64.sqrt();
        assert!(u.quat().max_abs_diff(&Quaternion::new(0.0, s, s, 0.0)) < 1e-15);
        assert!(c.reconstruct().max_abs_diff(&q) < 1e-15);
    }

    #[test]
    fn imaginary_unit_validation() {
        assert!(ImaginaryUnit::new(Quaternion::new(0.0, 0.6, 0.8, 0.0)).is_ok());
        assert!(ImaginaryUnit::new(Quaternion::new(0.1, 0.6, 0.8, 0.0)).is_err());
        assert!(ImaginaryUnit::new(Quaternion::new(0.0, 1.0, 1.0, 0.0)).is_err());
        assert!(ImaginaryUnit::normalize([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn conjugation_rotates_imaginary_part() {
        let w = Quaternion::new(1.0, 2.0, -1.0, 0.5);
        let q = Quaternion::new(0.3, 0.0, 2.0, 0.0);
        let r = w.conjugate_by(q).unwrap();
        assert!((r.w - q.w).abs() < 1e-14);
        assert!((r.imag_norm() - q.imag_norm()).abs() < 1e-14);
    }

    #[test]
    fn serde_as_array() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 0.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1,-2,0.5,0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Quaternion>("[1,2,3]").is_err());
    }
}
