use thiserror::Error;

use crate::t1::ValidityError;
use crate::t2::T2ValidityError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: lower end {lo} exceeds upper end {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("operands live on different level grids")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid triangular shape: {0}")]
    InvalidShape(String),

    #[error("Hukuhara difference does not exist")]
    NoHukuharaDifference,

    #[error("not a type-1 fuzzy number: {0}")]
    Validity(#[from] ValidityError),

    #[error("not a type-2 fuzzy number: {0}")]
    T2Validity(#[from] T2ValidityError),

    #[error("lower and upper planes differ at beta = 1 by {gap:e}")]
    DegenerateMismatch { gap: f64 },

    #[error("point {x} is not interior to the domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("not differentiable in the {form} form at x = {x}: {reason}")]
    NotDifferentiableInForm {
        form: String,
        x: f64,
        reason: String,
    },

    #[error("rule hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("integration produced a non-finite state at x = {x}")]
    IntegrationFailure { x: f64 },

    #[error("closed-form backend unsupported: {0}")]
    UnsupportedSpectrum(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
