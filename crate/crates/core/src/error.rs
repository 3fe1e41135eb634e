use thiserror::Error;

use crate::forms::VForm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series parameters differ: (m, N) = {left:?} vs {right:?}")]
    ParamMismatch { left: (usize, u32), right: (usize, u32) },
    #[error("ideal contains the unit monomial")]
    NotInMaximalIdeal,
    #[error("function ring kinds or dimensions differ")]
    RingMismatch,
    #[error("frequency violates the torus lattice: {0}")]
    LatticeViolation(String),
    #[error("both wedge factors are vector-valued")]
    DegreeMismatch,
    #[error("forms live on different geometries")]
    GeometryMismatch,
    #[error("series has a t-constant term, exponential would not terminate")]
    NotNilpotent,
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("operation needs {0} geometry")]
    WrongGeometry(&'static str),
    #[error("form is not dbar-closed; dbar = {0}")]
    NotClosed(Box<VForm>),
    #[error("harmonic obstruction {0}")]
    Obstructed(Box<VForm>),
    #[error("first-order datum is not a Dolbeault cocycle; dbar = {0}")]
    NotCocycle(Box<VForm>),
    #[error("not integrable modulo the ideal; residual = {0}")]
    NotIntegrableMod(Box<VForm>),
    #[error("residual fails the cocycle check modulo mA: {0}")]
    CocycleViolation(Box<VForm>),
    #[error("extension obstructed at order {order}: {witness}")]
    ObstructedExtension { order: u32, witness: Box<VForm> },
    #[error("normal part lies outside the ideal: {0}")]
    NotSubmanifoldDeformation(Box<VForm>),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("type error: expected {expected}, found {actual}")]
    Type { expected: String, actual: String },
}
