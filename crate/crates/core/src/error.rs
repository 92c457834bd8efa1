use thiserror::Error;

use crate::constructive::DisjointificationResult;

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Debug, Clone, Error)]
pub enum LatticeError {
    #[error("tag mismatch: {left} vs {right}")]
    TagMismatch { left: String, right: String },

    #[error("negative input: {0}")]
    NegativeInput(String),

    #[error("test vector {index} is not a nonzero positive element")]
    NegativeTestVector { index: usize },

    #[error("no m <= {m_max} gives ||u - u ^ m e|| < {eps}")]
    MNotFound { m_max: u64, eps: f64 },

    #[error("sequence is not made of step functions")]
    NonStepSequence,

    #[error("common refinement needs level {level}, above the configured maximum {max}")]
    RefinementOverflow { level: u32, max: u32 },

    #[error("term {index} is not dominated by the bound")]
    NotOrderBounded { index: usize },

    #[error("no index n_{k} exists within the horizon")]
    NoIndexFound { k: usize },

    #[error("|x| differs from u + v by {defect:e}")]
    NotADecomposition { defect: f64 },

    #[error("part {part} of the Riesz witness dips to {value:e}")]
    NegativePart { part: char, value: f64 },

    #[error("no admissible index for step {k} before the horizon (bound {bound:e})")]
    HorizonExhausted {
        k: usize,
        bound: f64,
        partial: Box<DisjointificationResult>,
    },

    #[error("selection stalled at step {k}")]
    SelectionStalled { k: usize },

    #[error("point is not inside the neighborhood")]
    NoRoom,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

impl LatticeError {
    /// Errors caused by malformed input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            LatticeError::TagMismatch { .. }
                | LatticeError::NegativeTestVector { .. }
                | LatticeError::NonStepSequence
                | LatticeError::InvalidTolerance(_)
                | LatticeError::InvalidElement(_)
                | LatticeError::IndexOutOfRange { .. }
        )
    }

    /// Stable machine-readable code, used in reports and scenario expectations.
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::TagMismatch { .. } => "TAG_MISMATCH",
            LatticeError::NegativeInput(_) => "NEGATIVE_INPUT",
            LatticeError::NegativeTestVector { .. } => "NEGATIVE_TEST_VECTOR",
            LatticeError::MNotFound { .. } => "M_NOT_FOUND",
            LatticeError::NonStepSequence => "NON_STEP_SEQUENCE",
            LatticeError::RefinementOverflow { .. } => "REFINEMENT_OVERFLOW",
            LatticeError::NotOrderBounded { .. } => "NOT_ORDER_BOUNDED",
            LatticeError::NoIndexFound { .. } => "NO_INDEX_FOUND",
            LatticeError::NotADecomposition { .. } => "NOT_A_DECOMPOSITION",
            LatticeError::NegativePart { .. } => "NEGATIVE_PART",
            LatticeError::HorizonExhausted { .. } => "HORIZON_EXHAUSTED",
            LatticeError::SelectionStalled { .. } => "SELECTION_STALLED",
            LatticeError::NoRoom => "NO_ROOM",
            LatticeError::InvalidTolerance(_) => "INVALID_TOLERANCE",
            LatticeError::InvalidElement(_) => "INVALID_ELEMENT",
            LatticeError::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
        }
    }
}
