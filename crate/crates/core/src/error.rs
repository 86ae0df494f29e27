use std::path::PathBuf;

use thiserror::Error;

use crate::lint::LintFinding;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed decimal literal {0:?}")]
    MalformedDecimal(String),

    #[error("{literal:?} has more than {max} fractional digits")]
    TooManyFractionalDigits { literal: String, max: u32 },

    #[error("negative value not allowed: {0}")]
    Negative(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid fraction {numerator}/{denominator}: {reason}")]
    InvalidFraction {
        numerator: u64,
        denominator: u64,
        reason: &'static str,
    },

    #[error("funnel counts violate monotonicity: {0}")]
    FunnelViolation(String),

    #[error("unit cost undefined: {0}")]
    UndefinedUnitCost(&'static str),

    #[error("no submitted reports")]
    NoSubmittedReports,

    #[error("maintainer hours must be positive")]
    NonPositiveHours,

    #[error("interval lower bound {lo} exceeds upper bound {hi}")]
    InvertedInterval { lo: f64, hi: f64 },

    #[error("interval endpoint is not finite")]
    NonFiniteInterval,

    #[error("unit mismatch: cannot {op} {left} and {right}")]
    UnitMismatch {
        op: &'static str,
        left: &'static str,
        right: &'static str,
    },

    #[error("division by interval containing zero")]
    DivisionByZeroInterval,

    #[error("negative interval endpoint in product")]
    NegativeEndpoint,

    #[error("invalid distribution for {param}: {reason}")]
    InvalidDistribution { param: String, reason: String },

    #[error("missing parameter {param:?} for {target}")]
    MissingParameter { param: String, target: &'static str },

    #[error("unknown parameter {param:?} for {target}")]
    UnknownParameter { param: String, target: &'static str },

    #[error("unknown cost target {0:?}")]
    UnknownTarget(String),

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("invalid pipeline configuration: {0}")]
    InvalidConfig(String),

    #[error("simulation horizon must be at least one week")]
    ZeroHorizon,

    #[error("simulation result was not produced from this configuration")]
    MismatchedResult,

    #[error("unknown ownership model {0:?}")]
    UnknownOwnershipModel(String),

    #[error("report has {} fatal finding(s)", .0.len())]
    FatalFindings(Vec<LintFinding>),

    #[error("duplicate campaign identifier {0:?}")]
    DuplicateCampaign(String),

    #[error("at least one campaign report is required")]
    NoReports,

    #[error("unsupported schema_version {0:?} (supported: \"1\")")]
    UnsupportedSchemaVersion(String),

    #[error("{origin}: parse error at line {line}, column {column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{origin}: {message}")]
    Document { origin: String, message: String },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Process exit status classes used by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Findings = 1,
    Input = 2,
    Computation = 3,
}

impl Error {
    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::FatalFindings(_) => ExitClass::Findings,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::Document { .. }
            | Error::UnsupportedSchemaVersion(_)
            | Error::MalformedDecimal(_)
            | Error::TooManyFractionalDigits { .. }
            | Error::Negative(_)
            | Error::InvalidFraction { .. }
            | Error::InvertedInterval { .. }
            | Error::NonFiniteInterval
            | Error::UnknownOwnershipModel(_)
            | Error::UnknownTarget(_)
            | Error::UnknownParameter { .. }
            | Error::MissingParameter { .. }
            | Error::InvalidDistribution { .. }
            | Error::InvalidConfig(_)
            | Error::ZeroHorizon
            | Error::DuplicateCampaign(_)
            | Error::NoReports
            | Error::FunnelViolation(_) => ExitClass::Input,
            Error::Overflow(_)
            | Error::UndefinedUnitCost(_)
            | Error::NoSubmittedReports
            | Error::NonPositiveHours
            | Error::UnitMismatch { .. }
            | Error::DivisionByZeroInterval
            | Error::NegativeEndpoint
            | Error::NoSamples
            | Error::MismatchedResult => ExitClass::Computation,
        }
    }
}
