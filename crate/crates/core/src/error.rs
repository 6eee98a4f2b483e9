use thiserror::Error;

use crate::model::Model;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed model: {0}")]
    Structure(String),

    #[error("invalid probability interval [{lo}, {hi}]")]
    Interval { lo: f64, hi: f64 },

    #[error("invalid symbol {0:?}")]
    Symbol(String),

    #[error("unknown state {0}")]
    UnknownState(String),

    #[error("white peak present: {}", .0.join(" "))]
    WhitePeak(Vec<String>),

    #[error("journeys do not terminate: {0}")]
    NonTerminating(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("no statistics: {0}")]
    NoStatistics(String),

    #[error("inconsistent observation {obs} at step {step}")]
    InconsistentObservation { obs: String, step: usize },

    #[error("trajectory inconsistent with model at time {time}")]
    TrackingFailed { time: usize },

    #[error("policy violates constraints: {0}")]
    Policy(String),

    #[error("no feasible policy: {0}")]
    Infeasible(String),

    #[error("intervals not resolved: {0}")]
    Unresolved(String),

    #[error("requires point probabilities: {0}")]
    NotPoint(String),

    #[error("expansion exceeded cap of {cap} states")]
    CapExceeded { cap: usize, partial: Box<Model> },

    #[error("enumeration exceeded cap of {0} developments")]
    EnumerationCap(usize),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("trajectory too short: {0}")]
    TooShort(String),

    #[error("partition does not cover crossing arrows: {}", .0.join(", "))]
    Coverage(Vec<String>),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("invalid preference: {0}")]
    Preference(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable code used on the `error: <code>: <detail>` line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Structure(_) => "structure",
            Error::Interval { .. } => "interval",
            Error::Symbol(_) => "symbol",
            Error::UnknownState(_) => "unknown-state",
            Error::WhitePeak(_) => "white-peak",
            Error::NonTerminating(_) => "non-terminating",
            Error::Numeric(_) => "numeric",
            Error::NoStatistics(_) => "no-statistics",
            Error::InconsistentObservation { .. } => "inconsistent-observation",
            Error::TrackingFailed { .. } => "tracking-failed",
            Error::Policy(_) => "policy",
            Error::Infeasible(_) => "infeasible",
            Error::Unresolved(_) => "unresolved",
            Error::NotPoint(_) => "not-point",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::EnumerationCap(_) => "cap-exceeded",
            Error::Budget(_) => "budget",
            Error::TooShort(_) => "too-short",
            Error::Coverage(_) => "coverage",
            Error::Partition(_) => "partition",
            Error::Preference(_) => "preference",
            Error::Inconclusive(_) => "inconclusive",
            Error::Io(_) => "io",
        }
    }

    /// Detail text for the CLI error line. White peaks print bare state ids.
    pub fn detail(&self) -> String {
        match self {
            Error::WhitePeak(ids) => ids.join(" "),
            other => other.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
