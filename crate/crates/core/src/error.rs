use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure to parse a domain expression.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Byte offset into the input where parsing failed.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    /// What was actually found there.
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{domain} requires n >= {min}, got {n}")]
    Dimension { domain: &'static str, n: i64, min: u32 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unsupported atom {0} for a closed-form spectral function")]
    UnsupportedAtom(String),

    #[error("{operation} is not supported for domain {domain}")]
    UnsupportedDomain {
        domain: String,
        operation: &'static str,
    },

    #[error("series expansion produced multiplicity {value} at nu = {nu}")]
    NegativeMultiplicity { nu: f64, value: i128 },

    #[error("nu = {nu} exceeds the series cutoff {cutoff}")]
    CutoffExceeded { nu: f64, cutoff: f64 },

    #[error("{function}({x}) is outside the function's domain")]
    Domain { function: &'static str, x: f64 },

    #[error("{function}({x}) overflows double precision")]
    Overflow { function: &'static str, x: f64 },

    #[error("quadrature for {what} did not converge: last two estimates {previous} and {estimate}")]
    QuadratureFailure {
        what: &'static str,
        previous: f64,
        estimate: f64,
    },

    #[error("{what}: achieved {achieved:e}, requested {requested:e}")]
    ToleranceNotMet {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("matrix is not positive-definite")]
    NotPositiveDefinite,

    #[error("target lives on S^{target_n_minus_1} but reference on S^{reference_n_minus_1}")]
    DimensionMismatch {
        target_n_minus_1: u32,
        reference_n_minus_1: u32,
    },

    #[error("target and reference use different boundary conditions")]
    BoundaryConditionMismatch,

    #[error("requested {requested} modes but the reference series has only {available}")]
    InsufficientModes { requested: usize, available: usize },

    #[error("quadratic scaling discriminant {value} is negative at mode {mode}")]
    NegativeDiscriminant { mode: usize, value: f64 },

    #[error("could not bracket the Neumann root at mode {mode}")]
    RootNotBracketed { mode: usize },
}
