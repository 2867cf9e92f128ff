use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero quaternion")]
    ZeroQuaternion,
    #[error("division by a zero quaternion")]
    ZeroDivisor,
    #[error("quaternion is not unit (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("quaternion is not a unit vector quaternion ({0})")]
    NotUnitVector(String),
    #[error("non-finite quaternion component")]
    NonFinite,
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("zero retardance, axis undefined")]
    ZeroRetardance,
    #[error("empty element sequence")]
    EmptySequence,
    #[error("ellipse extraction left a non-phase residual ({0:e})")]
    EllipseResidual(f64),
    #[error("cannot parse quaternion: {0}")]
    Parse(String),
}
