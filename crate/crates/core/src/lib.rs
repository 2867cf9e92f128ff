//! Quaternion calculus for coherent polarized light.
//!
//! A fully polarized optical field, a lossless waveplate and a Stokes vector
//! are all carried by the same four-component [`Quaternion`]. Signals are
//! transformed by right multiplication (`r = q * p`), so a sequence of
//! elements is written left to right in the order the light meets them.
//!
//! The crate is split into:
//!
//! * [`quat`]: the algebra itself (products, conjugations, exp/log,
//!   partial conjugation, precession).
//! * [`signal`]: conversions between quaternion, Jones vector, Stokes vector
//!   and polarization ellipse, plus phase/SOP manipulation.
//! * [`components`]: waveplates, their composition and axis/retardance form,
//!   and the partial polarizer.
//! * [`phase_shifter`]: closed-form waveplate angles for the QWP-HWP-QWP
//!   endless phase shifter, including the singular families and ramps.

pub mod components;
pub mod error;
pub mod phase_shifter;
pub mod quat;
pub mod signal;

pub use components::{PartialPolarizer, Waveplate, WaveplateAxisForm};
pub use error::{Error, Result};
pub use quat::{Axis, Quaternion, UnitQuaternion, UnitVectorQuaternion};
pub use signal::{ClassicalStokes, EllipseParams, JonesVector, OrthogonalityClass, StokesQuaternion};
