use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("network is not a star")]
    NotAStar,
    #[error("network is not a path")]
    NotAPath,
    #[error("network is not a tree")]
    NotATree,
    #[error("node weights are not uniform")]
    NonUniformWeights,
    #[error("instance does not have integer parameters")]
    NonIntegerInstance,
    #[error("facility count {p} not supported here ({reason})")]
    FacilityCount { p: usize, reason: &'static str },
    #[error("facility set is empty")]
    EmptyFacilitySet,
    #[error("node {0} out of range")]
    UnknownNode(usize),
    #[error("enumeration needs {required} plan evaluations, above the bound of {bound}")]
    WorkBoundExceeded { required: u128, bound: u128 },
    #[error("invalid grid step: {0}")]
    InvalidStep(String),
    #[error("solution value {value} is below the threshold {threshold}")]
    SolutionBelowThreshold { value: f64, threshold: f64 },
    #[error("invalid knapsack instance: {0}")]
    InvalidKnapsack(String),
    #[error("invalid generator ranges: {0}")]
    InvalidRanges(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for errors meaning "this solver does not apply to this instance",
    /// as opposed to malformed input.
    pub fn is_applicability(&self) -> bool {
        matches!(
            self,
            Error::NotAStar
                | Error::NotAPath
                | Error::NotATree
                | Error::NonUniformWeights
                | Error::NonIntegerInstance
                | Error::FacilityCount { .. }
                | Error::WorkBoundExceeded { .. }
        )
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
