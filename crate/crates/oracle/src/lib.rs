//! Reference Jones-calculus implementation.
//!
//! Everything here works on 2x2 complex matrices and complex field pairs, so
//! it can be used to cross-check the quaternion code in `polarquat`. Nothing
//! in `polarquat` depends on this crate.

use num_complex::Complex64;
use polarquat::components::{PartialPolarizer, Waveplate};
use polarquat::{JonesVector, Quaternion};
use std::ops::Mul;

/// Tolerance for the waveplate-class symmetry check.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

const H: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("not a waveplate matrix (symmetry defect {0:e})")]
    NotWaveplate(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2x2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Matrix2x2 {
    pub const IDENTITY: Matrix2x2 = Matrix2x2 {
        m11: Complex64::new(1.0, 0.0),
        m12: Complex64::new(0.0, 0.0),
        m21: Complex64::new(0.0, 0.0),
        m22: Complex64::new(1.0, 0.0),
    };

    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Matrix2x2 { m11, m12, m21, m22 }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn is_finite(&self) -> bool {
        [self.m11, self.m12, self.m21, self.m22].iter().all(|z| z.is_finite())
    }

    /// Largest deviation from the `[[a, -b*], [b, a*]]` form.
    pub fn symmetry_defect(&self) -> f64 {
        let d1 = (self.m22 - self.m11.conj()).norm();
        let d2 = (self.m12 + self.m21.conj()).norm();
        d1.max(d2)
    }

    pub fn is_waveplate_matrix(&self, tol: f64) -> bool {
        self.is_finite() && self.symmetry_defect() <= tol
    }

    pub fn apply(&self, v: &JonesVector) -> JonesVector {
        JonesVector::new(self.m11 * v.ex + self.m12 * v.ey, self.m21 * v.ex + self.m22 * v.ey)
    }

    pub fn max_abs_diff(&self, other: &Matrix2x2) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Mul for Matrix2x2 {
    type Output = Matrix2x2;

    fn mul(self, o: Matrix2x2) -> Matrix2x2 {
        Matrix2x2 {
            m11: self.m11 * o.m11 + self.m12 * o.m21,
            m12: self.m11 * o.m12 + self.m12 * o.m22,
            m21: self.m21 * o.m11 + self.m22 * o.m21,
            m22: self.m21 * o.m12 + self.m22 * o.m22,
        }
    }
}

/// Basis images: 1 -> I, i -> diag(h, -h), j -> [[0,-1],[1,0]], k -> [[0,h],[h,0]].
pub fn quat_to_matrix(q: Quaternion) -> Matrix2x2 {
    Matrix2x2 {
        m11: c(q.q0) + H * q.q1,
        m12: c(-q.q2) + H * q.q3,
        m21: c(q.q2) + H * q.q3,
        m22: c(q.q0) - H * q.q1,
    }
}

pub fn matrix_to_quat(m: &Matrix2x2) -> Result<Quaternion, OracleError> {
    if !m.is_finite() {
        return Err(OracleError::NonFinite);
    }
    let defect = m.symmetry_defect();
    if defect > SYMMETRY_TOLERANCE {
        return Err(OracleError::NotWaveplate(defect));
    }
    Ok(Quaternion::new(m.m11.re, m.m11.im, m.m21.re, m.m21.im))
}

pub fn jones_column(q: Quaternion) -> JonesVector {
    let m = quat_to_matrix(q);
    JonesVector::new(m.m11, m.m21)
}

pub fn oracle_apply(v: &JonesVector, w: &Waveplate) -> JonesVector {
    quat_to_matrix(w.quaternion()).apply(v)
}

/// Field through a partial polarizer, by projection onto the pass and block axes.
pub fn oracle_polarizer(v: &JonesVector, pol: &PartialPolarizer) -> JonesVector {
    let pass = jones_column(pol.pass_axis.into_inner());
    let n = pass.intensity().sqrt();
    let (px, py) = (pass.ex / n, pass.ey / n);
    // orthogonal complement of (px, py)
    let (bx, by) = (-py.conj(), px.conj());
    let a = px.conj() * v.ex + py.conj() * v.ey;
    let b = (bx.conj() * v.ex + by.conj() * v.ey) * pol.mu;
    JonesVector::new(a * px + b * bx, a * py + b * by)
}

/// Classical Stokes parameters straight from the field components.
pub fn classical_stokes(v: &JonesVector) -> [f64; 3] {
    let cross = v.ex * v.ey.conj();
    [v.ex.norm_sqr() - v.ey.norm_sqr(), 2.0 * cross.re, 2.0 * cross.im]
}

pub fn jones_max_abs_diff(a: &JonesVector, b: &JonesVector) -> f64 {
    (a.ex - b.ex).norm().max((a.ey - b.ey).norm())
}
