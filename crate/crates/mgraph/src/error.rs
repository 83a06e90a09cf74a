//! Error taxonomy shared by the whole crate.

use thiserror::Error;

/// Errors produced by graph construction, closed forms, and searches.
#[derive(Debug, Error)]
pub enum Error {
    /// A group description is malformed (empty, zero/one modulus, overflow).
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    /// An argument is outside the function's domain (e.g. multiplier < 2).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A closed form was asked about a graph it does not describe
    /// (e.g. a quantity that only exists for connected graphs).
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A restricted-domain formula was called on inputs that violate its
    /// hypotheses; the caller should fall back to the general route.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    /// The requested computation exceeds a configured size limit.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Text input (group literal, tree file) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An edge list that was required to be a tree is not one.
    #[error("not a tree: {0}")]
    NotATree(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
