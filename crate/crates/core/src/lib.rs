//! Exact symbolic computation for quantum affine algebra modules over
//! Q(q^(1/2)): truncated highest weight modules with Drinfeld mode actions,
//! bosonized intertwiner components, deformed Fock spaces with a
//! normal-ordering engine, and coefficientwise verification suites for the
//! defining relations, including a rank-two current algebra realized on
//! tensor products of level-two modules with Heisenberg Fock spaces.

pub mod cache;
pub(crate) mod zp;
pub mod charoracle;
pub mod fockvo;
pub mod intertwine;
pub mod linalg;
pub mod qfield;
pub mod report;
pub mod sl2mod;
pub mod spfour;

pub use qfield::{qexp_coeff, qfactorial, qint, qnum, LaurentPoly, Scalar};

use thiserror::Error;

/// Errors from operator application on truncated spaces.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QaError {
    /// The result leaves the stored truncation window. Distinct from a
    /// domain error: the identity may hold but cannot be decided here.
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    /// Invalid argument for the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A cache file does not match the requested key or version.
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
}

pub type Result<T> = std::result::Result<T, QaError>;
