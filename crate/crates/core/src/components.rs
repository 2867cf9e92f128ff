//! Waveplates and partial polarizers.
//!
//! A lossless waveplate is a unit quaternion `p` acting on a signal by right
//! multiplication, `r = q p`. With the slow-axis signal `q` and half
//! retardance `η` the plate is `p = q† e^{iη} q = e^{sη}`, where `s` is the
//! normalized Stokes quaternion of `q`. On the Poincaré sphere it precesses
//! the Stokes vector by `2η` about `s`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{exp_axis, Axis, Quaternion, UnitQuaternion, UnitVectorQuaternion};
use crate::signal::stokes;

/// Vector-part norm below which a plate counts as having no retardance.
pub const IDENTITY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waveplate {
    pub transform: UnitQuaternion,
}

/// `transform = exp(axis · eta)`; the retardance is `2 eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveplateAxisForm {
    pub axis: UnitVectorQuaternion,
    pub eta: f64,
}

impl WaveplateAxisForm {
    pub fn retardance(&self) -> f64 {
        2.0 * self.eta
    }

    pub fn to_waveplate(&self) -> Waveplate {
        Waveplate::from_unit(UnitQuaternion::new_unchecked(self.axis.scale(self.eta).exp()))
    }
}

impl Waveplate {
    pub const IDENTITY: Waveplate = Waveplate {
        transform: UnitQuaternion::ONE,
    };

    pub fn new(q: Quaternion) -> Result<Self> {
        Ok(Waveplate {
            transform: UnitQuaternion::new(q)?,
        })
    }

    pub fn from_unit(transform: UnitQuaternion) -> Self {
        Waveplate { transform }
    }

    pub fn quaternion(&self) -> Quaternion {
        *self.transform
    }

    pub fn inverse(&self) -> Waveplate {
        Waveplate::from_unit(self.transform.inverse())
    }
}

pub fn apply(signal: Quaternion, w: &Waveplate) -> Quaternion {
    signal * w.quaternion()
}

/// Product in propagation order: the first plate met by the light is the
/// leftmost factor.
pub fn compose(plates: &[Waveplate]) -> Result<Waveplate> {
    let (first, rest) = plates.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest
        .iter()
        .fold(*first, |acc, w| Waveplate::from_unit(acc.transform * w.transform)))
}

/// Plate with slow axis `slow` and half retardance `eta`: `slow† e^{iη} slow`.
pub fn waveplate_from_axis(slow: &UnitQuaternion, eta: f64) -> Waveplate {
    let p = slow.conj() * exp_axis(Axis::I, eta) * **slow;
    Waveplate::from_unit(UnitQuaternion::new_unchecked(p))
}

/// Same plate built as `exp(s η)` from the slow axis's Stokes direction.
pub fn waveplate_from_stokes_axis(axis: &UnitVectorQuaternion, eta: f64) -> Waveplate {
    WaveplateAxisForm { axis: *axis, eta }.to_waveplate()
}

/// Stokes direction of a signal as a unit vector quaternion.
pub fn stokes_axis(q: Quaternion) -> Result<UnitVectorQuaternion> {
    let s = stokes(q);
    UnitVectorQuaternion::from_vector([s.s1, s.s2, s.s3])
}

/// Principal logarithm of the plate, `η ∈ [0, π)`.
pub fn axis_retardance(w: &Waveplate) -> Result<WaveplateAxisForm> {
    let q = w.quaternion();
    let vn = q.vector_norm();
    if vn < IDENTITY_THRESHOLD {
        return Err(Error::ZeroRetardance);
    }
    let eta = vn.atan2(q.q0);
    let axis = UnitVectorQuaternion::from_vector(q.vector())?;
    Ok(WaveplateAxisForm { axis, eta })
}

/// The plate physically rotated by `psi`: `e^{-jψ} w e^{jψ}`.
pub fn rotate_element(w: &Waveplate, psi: f64) -> Waveplate {
    let r = exp_axis(Axis::J, psi);
    Waveplate::from_unit(UnitQuaternion::new_unchecked(r.conj() * w.quaternion() * r))
}

/// Quarter-wave plate with its slow axis at `psi` from horizontal.
pub fn qwp(psi: f64) -> Waveplate {
    let base = Quaternion::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    rotate_element(&Waveplate::from_unit(UnitQuaternion::new_unchecked(base)), psi)
}

/// Half-wave plate with its slow axis at `psi` from horizontal.
pub fn hwp(psi: f64) -> Waveplate {
    rotate_element(&Waveplate::from_unit(UnitQuaternion::I), psi)
}

/// Polarization dependent loss element: fields on `pass_axis` are kept,
/// fields on the orthogonal state `j · pass_axis` are scaled by `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialPolarizer {
    pub pass_axis: UnitQuaternion,
    pub mu: f64,
}

impl PartialPolarizer {
    pub fn new(pass_axis: UnitQuaternion, mu: f64) -> Result<Self> {
        let p = PartialPolarizer { pass_axis, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::OutOfRange {
                name: "mu",
                value: self.mu,
                range: "[0, 1]",
            });
        }
        Ok(())
    }

    fn pass_stokes(&self) -> Quaternion {
        stokes(*self.pass_axis).as_quaternion()
    }
}

/// `r = ½((1+μ) q - (1-μ) i q s)` with `s = i p^{†i} p`.
pub fn polarizer_apply(q: Quaternion, pol: &PartialPolarizer) -> Result<Quaternion> {
    pol.validate()?;
    let s = pol.pass_stokes();
    Ok((q.scale(1.0 + pol.mu) - (Quaternion::I * q * s).scale(1.0 - pol.mu)).scale(0.5))
}

/// The same element written with the double conjugate,
/// `r = ½((1+μ) q - (1-μ) q^{‡‡i} i s)`.
pub fn polarizer_apply_conjugate_form(q: Quaternion, pol: &PartialPolarizer) -> Result<Quaternion> {
    pol.validate()?;
    let s = pol.pass_stokes();
    Ok((q.scale(1.0 + pol.mu) - (q.double_conj(Axis::I) * Quaternion::I * s).scale(1.0 - pol.mu)).scale(0.5))
}

/// JSON element descriptor, e.g. `{"type":"qwp","psi":0.3}`.
///
/// `psi` rotates the element physically. For `custom` the quaternion is the
/// plate itself; for `polarizer` it is the pass-axis signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Device {
    Qwp {
        #[serde(default)]
        psi: f64,
    },
    Hwp {
        #[serde(default)]
        psi: f64,
    },
    Custom {
        #[serde(default)]
        psi: f64,
        quat: UnitQuaternion,
    },
    Polarizer {
        #[serde(default)]
        psi: f64,
        quat: UnitQuaternion,
        mu: f64,
    },
}

impl Device {
    /// The lossless part, or `None` for a polarizer.
    pub fn waveplate(&self) -> Option<Waveplate> {
        match *self {
            Device::Qwp { psi } => Some(qwp(psi)),
            Device::Hwp { psi } => Some(hwp(psi)),
            Device::Custom { psi, quat } => Some(rotate_element(&Waveplate::from_unit(quat), psi)),
            Device::Polarizer { .. } => None,
        }
    }

    pub fn act(&self, signal: Quaternion) -> Result<Quaternion> {
        match *self {
            Device::Polarizer { psi, quat, mu } => {
                let pass = UnitQuaternion::new_unchecked(*quat * exp_axis(Axis::J, psi));
                polarizer_apply(signal, &PartialPolarizer::new(pass, mu)?)
            }
            _ => Ok(apply(signal, &self.waveplate().expect("lossless device"))),
        }
    }
}

/// Sends `signal` through `devices` in order.
pub fn propagate(signal: Quaternion, devices: &[Device]) -> Result<Quaternion> {
    devices.iter().try_fold(signal, |q, d| d.act(q))
}

/// Composite plate of a lossless device sequence; `None` if it contains a
/// polarizer.
pub fn compose_devices(devices: &[Device]) -> Result<Option<Waveplate>> {
    let plates: Option<Vec<Waveplate>> = devices.iter().map(Device::waveplate).collect();
    plates.map(|p| compose(&p)).transpose()
}
