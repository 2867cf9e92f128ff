//! Optical signals as quaternions.
//!
//! The Jones vector `(Ex, Ey)` maps to `q = Ex + Ey j` where the complex
//! unit of `Ex` and `Ey` is read as the quaternion `i`:
//! `q = Re Ex + Im Ex i + Re Ey j + Im Ey k`.
//!
//! A global phase is applied by *left* multiplication with `e^{iφ}`; a
//! waveplate acts by *right* multiplication.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{exp_axis, Axis, Quaternion, UnitQuaternion};

/// Default relative tolerance of [`classify_orthogonality`].
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// `|cos 2ε| <= CIRCULAR_TOLERANCE` (normalized by `R²`) is treated as circular.
pub const CIRCULAR_TOLERANCE: f64 = 1e-9;

/// Maximum j/k residual left after stripping `θ` and `ε` in [`to_ellipse`].
pub const PHASE_RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    pub fn new(ex: Complex64, ey: Complex64) -> Self {
        JonesVector { ex, ey }
    }

    pub fn intensity(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }
}

/// Polarization ellipse form `q = R e^{iφ} e^{kε} e^{jθ}`.
///
/// Ranges: `R >= 0`, `φ ∈ (-π, π]`, `ε ∈ [-π/4, π/4]`, `θ ∈ (-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseParams {
    pub r: f64,
    pub phi: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl EllipseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::OutOfRange {
                name: "r",
                value: self.r,
                range: "[0, inf)",
            });
        }
        if !(self.phi > -PI && self.phi <= PI) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: self.phi,
                range: "(-pi, pi]",
            });
        }
        if !(-FRAC_PI_4..=FRAC_PI_4).contains(&self.epsilon) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: self.epsilon,
                range: "[-pi/4, pi/4]",
            });
        }
        if !(self.theta > -FRAC_PI_2 && self.theta <= FRAC_PI_2) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: self.theta,
                range: "(-pi/2, pi/2]",
            });
        }
        Ok(())
    }
}

/// Stokes vector quaternion `s = i q^{†i} q`, stored without its (zero)
/// scalar part. Component order follows the quaternion: `s1` on `i`, `s2` on
/// `j`, `s3` on `k`. Note `s2` is the classical `S3` and `s3` the classical
/// `S2`; see [`ClassicalStokes`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesQuaternion {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesQuaternion {
    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(0.0, self.s1, self.s2, self.s3)
    }

    pub fn magnitude(&self) -> f64 {
        self.as_quaternion().norm()
    }
}

impl std::ops::Neg for StokesQuaternion {
    type Output = StokesQuaternion;
    fn neg(self) -> Self {
        StokesQuaternion {
            s1: -self.s1,
            s2: -self.s2,
            s3: -self.s3,
        }
    }
}

/// Conventional Stokes components `S1 = |Ex|²-|Ey|²`, `S2 = 2Re(Ex Ey*)`,
/// `S3 = 2Im(Ex Ey*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalStokes {
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S3")]
    pub s3: f64,
}

impl ClassicalStokes {
    pub fn to_array(self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }
}

/// Relation between two signals read off the product `p q†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrthogonalityClass {
    /// Same SOP and a π/2 relative phase: `(pq†)_0 = (pq†)_2 = (pq†)_3 = 0`.
    SameSOPOrthogonalPhase,
    /// `(pq†)_0 = (pq†)_1 = 0`.
    OrthogonalSOP,
    /// `(pq†)_2 = (pq†)_3 = 0`.
    SameSOP,
    /// Only `(pq†)_0 = 0`.
    QuaternionOrthogonal,
    None,
}

pub fn from_jones(v: &JonesVector) -> Quaternion {
    Quaternion::new(v.ex.re, v.ex.im, v.ey.re, v.ey.im)
}

pub fn to_jones(q: Quaternion) -> JonesVector {
    JonesVector::new(Complex64::new(q.q0, q.q1), Complex64::new(q.q2, q.q3))
}

impl From<JonesVector> for Quaternion {
    fn from(v: JonesVector) -> Self {
        from_jones(&v)
    }
}

pub fn stokes(q: Quaternion) -> StokesQuaternion {
    let s = Quaternion::I * q.partial_conj(Axis::I) * q;
    StokesQuaternion {
        s1: s.q1,
        s2: s.q2,
        s3: s.q3,
    }
}

pub fn to_classical(s: &StokesQuaternion) -> ClassicalStokes {
    ClassicalStokes {
        s1: s.s1,
        s2: s.s3,
        s3: s.s2,
    }
}

pub fn from_classical(c: &ClassicalStokes) -> StokesQuaternion {
    StokesQuaternion {
        s1: c.s1,
        s2: c.s3,
        s3: c.s2,
    }
}

pub fn classical_from_jones(v: &JonesVector) -> ClassicalStokes {
    let cross = v.ex * v.ey.conj();
    ClassicalStokes {
        s1: v.ex.norm_sqr() - v.ey.norm_sqr(),
        s2: 2.0 * cross.re,
        s3: 2.0 * cross.im,
    }
}

/// `e^{iφ} q`
pub fn apply_phase(q: Quaternion, phi: f64) -> Quaternion {
    exp_axis(Axis::I, phi) * q
}

/// `e^{iφ} j q`, a signal with the orthogonal SOP.
pub fn orthogonal_sop(q: Quaternion, phi: f64) -> Quaternion {
    exp_axis(Axis::I, phi) * Quaternion::J * q
}

/// The waveplate `p = q \ e^{iφ} j q` taking unit signal `q` to an
/// orthogonal state.
pub fn waveplate_to_orthogonal(q: &UnitQuaternion, phi: f64) -> UnitQuaternion {
    UnitQuaternion::new_unchecked(q.conj() * orthogonal_sop(**q, phi))
}

pub fn classify_orthogonality(p: Quaternion, q: Quaternion, tol: f64) -> Result<OrthogonalityClass> {
    if p.norm() == 0.0 || q.norm() == 0.0 {
        return Err(Error::ZeroQuaternion);
    }
    let m = p * q.conj();
    let limit = tol * m.norm();
    let zero = |c: f64| c.abs() <= limit;
    let [m0, m1, m2, m3] = m.to_array().map(zero);
    Ok(if m0 && m2 && m3 {
        OrthogonalityClass::SameSOPOrthogonalPhase
    } else if m0 && m1 {
        OrthogonalityClass::OrthogonalSOP
    } else if m2 && m3 {
        OrthogonalityClass::SameSOP
    } else if m0 {
        OrthogonalityClass::QuaternionOrthogonal
    } else {
        OrthogonalityClass::None
    })
}

/// `q = R e^{iφ} e^{kε} e^{jθ}`
pub fn from_ellipse(e: &EllipseParams) -> Result<Quaternion> {
    e.validate()?;
    Ok((exp_axis(Axis::I, e.phi) * exp_axis(Axis::K, e.epsilon) * exp_axis(Axis::J, e.theta)).scale(e.r))
}

/// Inverse of [`from_ellipse`].
///
/// `ε` comes from the `j` component of the Stokes quaternion
/// (`sin 2ε = -s2/R²`), `θ = ½ atan2(s3, s1)`, and `φ` from stripping the
/// polarization factors off `q`. For circular states (`cos 2ε ≈ 0`) the
/// orientation is undefined; `θ` is set to zero and the ambiguity is folded
/// into `φ`.
pub fn to_ellipse(q: Quaternion) -> Result<EllipseParams> {
    let r = q.norm();
    if r == 0.0 {
        return Err(Error::ZeroQuaternion);
    }
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    let s = stokes(q.scale(1.0 / r));
    let linear = s.s1.hypot(s.s3);
    let (epsilon, theta) = if linear <= CIRCULAR_TOLERANCE {
        (if s.s2 <= 0.0 { FRAC_PI_4 } else { -FRAC_PI_4 }, 0.0)
    } else {
        let mut theta = 0.5 * s.s3.atan2(s.s1);
        if theta <= -FRAC_PI_2 {
            theta += PI;
        }
        (0.5 * (-s.s2).atan2(linear), theta)
    };
    let residual = q * exp_axis(Axis::J, -theta) * exp_axis(Axis::K, -epsilon) / r;
    let off = residual.q2.abs().max(residual.q3.abs());
    if off > PHASE_RESIDUAL_TOLERANCE {
        return Err(Error::EllipseResidual(off));
    }
    let mut phi = residual.q1.atan2(residual.q0);
    if phi <= -PI {
        phi += 2.0 * PI;
    }
    Ok(EllipseParams { r, phi, epsilon, theta })
}
