use thiserror::Error;

use crate::order::{Candidate, RelOutcome};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A rule was applied to a profile or election it is not defined on.
    #[error("incompatible input: {0}")]
    Incompatible(String),

    /// Pairwise outcomes could not be assembled into a weak order.
    #[error("assembly failed: {0}")]
    Assembly(#[from] AssemblyError),

    /// An exhaustive enumeration would exceed its hard size limit.
    #[error("enumeration guard: {what} needs {size} cases, limit is {limit}")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
}

/// Why a family of pairwise outcomes is not the projection of any weak order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("no outcome supplied for pair ({0}, {1})")]
    MissingPair(Candidate, Candidate),

    #[error("pair ({i}, {j}) is not antisymmetric: {forward} vs {backward}")]
    Antisymmetry {
        i: Candidate,
        j: Candidate,
        forward: RelOutcome,
        backward: RelOutcome,
    },

    #[error("triple ({0}, {1}, {2}) has inconsistent outcomes {3:?}")]
    InconsistentTriple(Candidate, Candidate, Candidate, [RelOutcome; 3]),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn incompatible(msg: impl Into<String>) -> Error {
    Error::Incompatible(msg.into())
}

pub(crate) fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
