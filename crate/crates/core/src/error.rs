use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("multiplication table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("group has {classes} conjugacy classes, above the cap of {cap}")]
    ClassCountCapExceeded { classes: usize, cap: usize },
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subsets belong to different groups")]
    GroupMismatch,
    #[error("subset is empty")]
    EmptySet,
    #[error("subset is not symmetric")]
    NotSymmetric,
    #[error("subset does not contain the identity")]
    MissingIdentity,
    #[error("exact cover has {points} points to cover, above the cap of {cap}")]
    ExactCapExceeded { points: usize, cap: usize },
    #[error("commuting probability {pr} is below epsilon {epsilon}")]
    ProbabilityBelowEpsilon { pr: Rational, epsilon: Rational },
    #[error("{0} conjugating elements requested; at most {1} supported")]
    PowerCapExceeded(usize, usize),
    #[error("hypothesis of {statement} violated: {reason}")]
    HypothesisViolated { statement: String, reason: String },
    #[error("unknown statement id {0:?}")]
    UnknownStatement(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("invalid element id {0}")]
    InvalidElement(usize),
    #[error("spec parse error: {0}")]
    SpecParse(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::SpecParse(err.to_string())
    }
}

impl Error {
    /// Variant name, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotLatinSquare(_) => "NotLatinSquare",
            Error::NotAssociative(..) => "NotAssociative",
            Error::NoIdentity => "NoIdentity",
            Error::NoInverse(_) => "NoInverse",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::ClassCountCapExceeded { .. } => "NormalEnumerationCapExceeded",
            Error::NotSubgroup => "NotSubgroup",
            Error::NotNormal => "NotNormal",
            Error::GroupMismatch => "GroupMismatch",
            Error::EmptySet => "EmptySet",
            Error::NotSymmetric => "NotSymmetric",
            Error::MissingIdentity => "MissingIdentity",
            Error::ExactCapExceeded { .. } => "ExactCapExceeded",
            Error::ProbabilityBelowEpsilon { .. } => "ProbabilityBelowEpsilon",
            Error::PowerCapExceeded(..) => "PowerCapExceeded",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::UnknownStatement(_) => "UnknownStatement",
            Error::BadParams(_) => "BadParams",
            Error::InvalidElement(_) => "InvalidElement",
            Error::SpecParse(_) => "SpecParseError",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::Io(_) => "Io",
        }
    }

    /// Whether the error reports a failed mathematical check rather than
    /// unusable input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::ProbabilityBelowEpsilon { .. } | Error::HypothesisViolated { .. } | Error::VerificationFailed(_)
        )
    }
}
