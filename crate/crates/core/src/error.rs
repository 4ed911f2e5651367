use thiserror::Error;

use crate::groupoid::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("groupoid axioms violated ({} violation(s)); first: {}", .0.violations.len(), .0.first_message())]
    InvalidGroupoid(ValidationReport),

    #[error("group action axiom violated: {0}")]
    InvalidAction(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("{what} bound {bound} exceeded (estimated size {estimate})")]
    BoundExceeded {
        what: &'static str,
        bound: u64,
        estimate: u64,
    },

    #[error("automorphism group of order {order} exceeds the isomorphism search bound {bound}")]
    GroupSearchBound { order: usize, bound: usize },

    #[error("invalid finite space: {0}")]
    InvalidSpace(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("pushout enumeration aborted after {0} morphisms")]
    PushoutAborted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_bound(&self) -> bool {
        matches!(
            self,
            Error::BoundExceeded { .. } | Error::GroupSearchBound { .. } | Error::PushoutAborted(_)
        )
    }
}
