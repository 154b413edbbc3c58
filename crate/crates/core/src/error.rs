use thiserror::Error;

use crate::model::UserId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no records")]
    EmptyInput,

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid score {0}: must be in [-10,-1] or [1,10]")]
    InvalidScore(i64),

    #[error("self-rating by user {0}")]
    SelfRating(UserId),

    #[error("unknown user {0}")]
    UnknownUser(UserId),

    #[error("viewer and target must differ (both are {0})")]
    SameViewerTarget(UserId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input to {0}")]
    EmptyData(&'static str),

    #[error("rankings cover different user sets")]
    UserSetMismatch,

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}
