//! Orlicz functions and their calculus: scalar and Musielak modulars,
//! Luxemburg norms, dilations, induced functions, Matuszewska-style index
//! estimation, the delta-2 condition at zero, complementary functions, and
//! the Lechner verdict for Orlicz sequence spaces.

mod criteria;
mod function;
mod musielak;

pub use criteria::{
    default_b_grid, default_t_grid, delta2_at_zero, equivalence_near_zero_diagnostic,
    indices_estimate, lechner_verdict_orlicz, EquivalenceReport, EquivalenceVerdict, IndicesGrid,
    IndicesReport,
};
pub use function::{h_m_membership, OrliczFunction, DEFAULT_CONJUGATE_S_MAX};
pub use musielak::{
    luxemburg_norm, modular, musielak_factorization_check, scalar_luxemburg_norm, scalar_modular,
    FactorizationReport, MusielakSequence,
};

use crate::seqvec::SeqError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrliczError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("{0} is degenerate (vanishes on a right-neighborhood of 0)")]
    DegenerateFunction(String),
    #[error("function vanishes at {0}; normalized dilation undefined there")]
    DegenerateAtPoint(f64),
    #[error("{label} is not normalized (M(1) = {value})")]
    NotNormalized { label: String, value: f64 },
    #[error("vector touches index {index} but the function family has only {len} members")]
    IndexBeyondFamily { index: u64, len: usize },
    #[error("unknown Orlicz literal `{0}`")]
    BadLiteral(String),
    #[error("cannot read table file: {0}")]
    Io(String),
    #[error(transparent)]
    Seq(#[from] SeqError),
}
