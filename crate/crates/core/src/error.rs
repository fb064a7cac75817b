use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear part is not a rotation")]
    NotARotation,
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("subgroup containment violated: {0}")]
    Containment(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),
    #[error("invalid substitution system: {0}")]
    InvalidSystem(String),
    #[error("hypotenuse pair forms neither a rectangle nor a kite: {0}")]
    BadHypotenusePair(String),
    #[error("tile {0} is not interior to the patch")]
    NotInterior(usize),
    #[error("substitution is not primitive up to power {0}")]
    NotPrimitive(usize),
    #[error("census did not close within {budget} rounds ({found} classes so far)")]
    CensusBudget { budget: usize, found: usize },
    #[error("orientation conflict: {0}")]
    OrientationConflict(String),
    #[error("non-cellular substitution image: {0}")]
    NonCellular(String),
    #[error("symmetric center lost its symmetry under substitution: {0}")]
    SymmetryLost(String),
    #[error("outside the supported regime: {0}")]
    UnsupportedRegime(String),
}
