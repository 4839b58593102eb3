//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the algebraic and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two tensors with different ambient configuration were combined.
    #[error("configuration mismatch: (n={left_n}, L={left_l}) vs (n={right_n}, L={right_l})")]
    ConfigMismatch {
        left_n: u8,
        left_l: u8,
        right_n: u8,
        right_l: u8,
    },

    /// A resource guard rejected the requested problem size.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// A generator index set was empty, unsorted, or out of range.
    #[error("invalid generator index set: {0}")]
    BadGenerator(String),

    /// An operation required a homogeneous input of a specific degree.
    #[error("degree error: {0}")]
    Degree(String),

    /// exp/log precondition on the constant term failed.
    #[error("constant term violates precondition: {0}")]
    ConstantTerm(String),

    /// A rational string could not be parsed.
    #[error("cannot parse rational {0:?}")]
    BadRational(String),

    /// A vector was not a member of the expected span.
    #[error("element lies outside the expected subspace: {0}")]
    OutsideSpan(String),

    /// Two cells were composed along a direction where their boundaries differ.
    #[error("not composable: {0}")]
    NotComposable(String),

    /// Structure-constant tables failed an axiom that must hold by construction.
    #[error("internal consistency fault: {0}")]
    Inconsistent(String),

    /// A sampled brane violated the globe boundary conditions.
    #[error("globe condition violated: {0}")]
    BadBrane(String),

    /// Input grids/paths too small or malformed for the requested quadrature.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Dimension/index bookkeeping mismatch in user input.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// JSON (de)serialization failure, with context.
    #[error("serialization: {0}")]
    Serde(String),

    /// File I/O failure, with path context.
    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
