//! Real quaternion algebra.
//!
//! `q = q0 + q1 i + q2 j + q3 k` with `i² = j² = k² = ijk = -1`.
//! Everything here is a pure function of immutable `Copy` values.

use std::fmt;
use std::ops::{Add, AddAssign, Deref, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative tolerance on the norm accepted by [`UnitQuaternion::new`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// A real quaternion, scalar first.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// One of the three base vector quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    J,
    K,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::I, Axis::J, Axis::K];

    pub fn unit(self) -> Quaternion {
        match self {
            Axis::I => Quaternion::I,
            Axis::J => Quaternion::J,
            Axis::K => Quaternion::K,
        }
    }

    /// Position of this axis in `[q0, q1, q2, q3]`.
    pub fn index(self) -> usize {
        match self {
            Axis::I => 1,
            Axis::J => 2,
            Axis::K => 3,
        }
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    pub fn from_parts(scalar: f64, vector: [f64; 3]) -> Self {
        Quaternion::new(scalar, vector[0], vector[1], vector[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    /// `Sc(q)`
    pub fn scalar(self) -> f64 {
        self.q0
    }

    /// `Ve(q)` as a 3-vector.
    pub fn vector(self) -> [f64; 3] {
        [self.q1, self.q2, self.q3]
    }

    /// The vector part as a quaternion with zero scalar.
    pub fn vector_part(self) -> Quaternion {
        Quaternion::new(0.0, self.q1, self.q2, self.q3)
    }

    pub fn component(self, axis: Axis) -> f64 {
        self.to_array()[axis.index()]
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        let [a, b, c, d] = self.to_array();
        a.hypot(b).hypot(c.hypot(d))
    }

    pub fn vector_norm(self) -> f64 {
        self.q1.hypot(self.q2).hypot(self.q3)
    }

    /// Four-dimensional inner product, `Sc(p† q)`.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    pub fn normalize(self) -> Result<UnitQuaternion> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(UnitQuaternion(self.scale(1.0 / n)))
    }

    /// Right division `self / q = self q† / |q|²`, so that `(p / q) q = p`.
    pub fn right_div(self, q: Quaternion) -> Result<Quaternion> {
        let n2 = q.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok((self * q.conj()).scale(1.0 / n2))
    }

    /// Left division `self \ p = self† p / |self|²`, so that `q (q \ p) = p`.
    pub fn left_div(self, p: Quaternion) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok((self.conj() * p).scale(1.0 / n2))
    }

    pub fn inverse(self) -> Result<Quaternion> {
        Quaternion::ONE.right_div(self)
    }

    /// `e^q = e^{q0} (cos|v| + v̂ sin|v|)`.
    pub fn exp(self) -> Quaternion {
        let mag = self.q0.exp();
        let theta = self.vector_norm();
        if theta == 0.0 {
            return Quaternion::new(mag, 0.0, 0.0, 0.0);
        }
        let (s, c) = theta.sin_cos();
        let k = mag * s / theta;
        Quaternion::new(mag * c, self.q1 * k, self.q2 * k, self.q3 * k)
    }

    /// Principal logarithm; the vector angle lies in `[0, π]`.
    ///
    /// A negative real quaternion has no unique axis. It is mapped onto the
    /// `i` axis: `ln(-a) = ln a + iπ`.
    pub fn ln(self) -> Result<Quaternion> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        let vn = self.vector_norm();
        let log_n = n.ln();
        if vn == 0.0 {
            return Ok(if self.q0 > 0.0 {
                Quaternion::new(log_n, 0.0, 0.0, 0.0)
            } else {
                Quaternion::new(log_n, std::f64::consts::PI, 0.0, 0.0)
            });
        }
        let angle = vn.atan2(self.q0);
        let k = angle / vn;
        Ok(Quaternion::new(log_n, self.q1 * k, self.q2 * k, self.q3 * k))
    }

    /// Single partial conjugate `q^{†v}`: only the `v` component is negated.
    pub fn partial_conj(self, v: Axis) -> Quaternion {
        let mut a = self.to_array();
        a[v.index()] = -a[v.index()];
        Quaternion::from_array(a)
    }

    /// Double partial conjugate `q^{‡‡v}`: the two vector components other
    /// than `v` are negated, the scalar and `v` components are kept.
    pub fn double_conj(self, kept: Axis) -> Quaternion {
        let mut a = self.to_array();
        for axis in Axis::ALL {
            if axis != kept {
                a[axis.index()] = -a[axis.index()];
            }
        }
        Quaternion::from_array(a)
    }

    /// `e^{-vθ} q e^{vθ}`: the vector part is rotated by `2θ` about `v`
    /// (left-handed in the `(i, j, k)` frame), the scalar part is unchanged.
    pub fn precess(self, v: &UnitVectorQuaternion, theta: f64) -> Quaternion {
        let half = v.scale(theta).exp();
        half.conj() * self * half
    }

    /// Quaternion-sense orthogonality, `|Sc(p q†)| <= tol |p| |q|`.
    pub fn is_orthogonal(self, other: Quaternion, tol: f64) -> bool {
        self.dot(other).abs() <= tol * self.norm() * other.norm()
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        (self - other).to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// `e^{vθ} = cos θ + v sin θ` for a base axis `v`.
pub fn exp_axis(axis: Axis, theta: f64) -> Quaternion {
    let (s, c) = theta.sin_cos();
    let mut a = [c, 0.0, 0.0, 0.0];
    a[axis.index()] = s;
    Quaternion::from_array(a)
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// Hamilton product: `p0q0 - Ve(p)·Ve(q) + p0 Ve(q) + q0 Ve(p) + Ve(p)×Ve(q)`.
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.q0 * q.q0 - p.q1 * q.q1 - p.q2 * q.q2 - p.q3 * q.q3,
            p.q0 * q.q1 + p.q1 * q.q0 + p.q2 * q.q3 - p.q3 * q.q2,
            p.q0 * q.q2 - p.q1 * q.q3 + p.q2 * q.q0 + p.q3 * q.q1,
            p.q0 * q.q3 + p.q1 * q.q2 - p.q2 * q.q1 + p.q3 * q.q0,
        )
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
        self.scale(1.0 / s)
    }
}

impl From<f64> for Quaternion {
    fn from(s: f64) -> Self {
        Quaternion::new(s, 0.0, 0.0, 0.0)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::from_array(a)
    }
}

/// Text form `q0,q1,q2,q3`. `Display` for `f64` prints the shortest string
/// that parses back to the same value, so text round trips are exact.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.q0, self.q1, self.q2, self.q3)
    }
}

impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(trimmed);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 comma-separated components, got {}",
                parts.len()
            )));
        }
        let mut a = [0.0; 4];
        for (slot, part) in a.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
        }
        let q = Quaternion::from_array(a);
        if !q.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(q)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let a = <[f64; 4]>::deserialize(deserializer)?;
        Ok(Quaternion::from_array(a))
    }
}

/// A quaternion whose norm is within [`UNIT_TOLERANCE`] of one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    /// Validates without rescaling.
    pub fn new(q: Quaternion) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(UnitQuaternion(q))
    }

    /// Rescales any nonzero quaternion onto the unit sphere.
    pub fn new_normalize(q: Quaternion) -> Result<Self> {
        q.normalize()
    }

    /// Caller guarantees the norm is one up to rounding, e.g. for a product
    /// of unit quaternions.
    pub(crate) fn new_unchecked(q: Quaternion) -> Self {
        UnitQuaternion(q)
    }

    pub fn into_inner(self) -> Quaternion {
        self.0
    }

    /// For a unit quaternion the conjugate is the inverse.
    pub fn inverse(self) -> UnitQuaternion {
        UnitQuaternion(self.0.conj())
    }
}

impl Deref for UnitQuaternion {
    type Target = Quaternion;
    fn deref(&self) -> &Quaternion {
        &self.0
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * o.0)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Self {
        u.0
    }
}

impl Serialize for UnitQuaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitQuaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let q = Quaternion::deserialize(deserializer)?;
        UnitQuaternion::new(q).map_err(serde::de::Error::custom)
    }
}

/// A unit quaternion with an exactly zero scalar part. Squares to `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVectorQuaternion(Quaternion);

impl UnitVectorQuaternion {
    pub const I: UnitVectorQuaternion = UnitVectorQuaternion(Quaternion::I);
    pub const J: UnitVectorQuaternion = UnitVectorQuaternion(Quaternion::J);
    pub const K: UnitVectorQuaternion = UnitVectorQuaternion(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        if q.q0 != 0.0 {
            return Err(Error::NotUnitVector(format!("scalar part {}", q.q0)));
        }
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnitVector(format!("norm {norm}")));
        }
        Ok(UnitVectorQuaternion(q))
    }

    /// Normalizes an arbitrary nonzero 3-vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let q = Quaternion::from_parts(0.0, v);
        let n = q.norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(UnitVectorQuaternion(q.scale(1.0 / n)))
    }

    pub fn into_inner(self) -> Quaternion {
        self.0
    }
}

impl Deref for UnitVectorQuaternion {
    type Target = Quaternion;
    fn deref(&self) -> &Quaternion {
        &self.0
    }
}

impl From<Axis> for UnitVectorQuaternion {
    fn from(a: Axis) -> Self {
        UnitVectorQuaternion(a.unit())
    }
}
