use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative cycle detected at vertex {vertex}: {context}")]
    NegativeCycleDetected { vertex: usize, context: String },

    #[error("relaxation did not converge within {rounds} rounds from source {source_vertex}")]
    NotConverged { source_vertex: usize, rounds: usize },

    #[error("state space of {states} states exceeds budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },

    #[error("result carries no witness data")]
    WitnessUnavailable,

    #[error("no plan exists from {from} to {to}")]
    NoPlan { from: usize, to: usize },

    #[error("illegal traversal at step {step}: {reason}")]
    IllegalTraversal { step: usize, reason: String },

    #[error("illegal recharge at step {step}: {reason}")]
    IllegalRecharge { step: usize, reason: String },

    #[error("charge out of range at state {state}: {reason}")]
    ChargeOutOfRange { state: usize, reason: String },

    #[error("plan states cost {stated} but steps cost {computed}")]
    CostMismatch { stated: String, computed: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires integer inputs: {0}")]
    NonIntegral(String),

    #[error("operation requires strict mode: {0}")]
    StrictModeRequired(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier used on the CLI diagnostic line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NegativeCycleDetected { .. } => "NegativeCycleDetected",
            Error::NotConverged { .. } => "NotConverged",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::WitnessUnavailable => "WitnessUnavailable",
            Error::NoPlan { .. } => "NoPlan",
            Error::IllegalTraversal { .. } => "IllegalTraversal",
            Error::IllegalRecharge { .. } => "IllegalRecharge",
            Error::ChargeOutOfRange { .. } => "ChargeOutOfRange",
            Error::CostMismatch { .. } => "CostMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonIntegral(_) => "NonIntegral",
            Error::StrictModeRequired(_) => "StrictModeRequired",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
