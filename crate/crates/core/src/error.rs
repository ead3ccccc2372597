use thiserror::Error;

use crate::lattice::TieReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid quotient rule `{0}`: {1}")]
    InvalidRule(String, String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{resource} budget exceeded: attempted {attempted}, limit {limit}")]
    Budget {
        resource: &'static str,
        attempted: u64,
        limit: u64,
    },

    #[error("undecided comparison after maximal refinement: {0}")]
    Undecided(String),

    #[error("tie between ({}, {}) and ({}, {}) on {}", .0.a.0, .0.a.1, .0.b.0, .0.b.1, .0.quantity)]
    Tie(Box<TieReport>),

    #[error("sequence too short: need {need} members, have {have}")]
    SequenceTooShort { need: usize, have: usize },

    #[error("formula inapplicable: {0}")]
    FormulaInapplicable(String),

    #[error("malformed cache: {0}")]
    Cache(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
