use thiserror::Error;

/// Failures raised anywhere in the library.
///
/// Variant names double as the stable error names printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^31")]
    ModulusTooLarge(u64),
    #[error("bad prime {prime}: {reason}")]
    BadPrime { prime: u64, reason: String },
    #[error("ideal does not have finite colength (no vanishing degree up to {cap})")]
    InfiniteColength { cap: u64 },
    #[error("degree {needed} exceeds the configured degree cap {cap}")]
    DegreeCapExceeded { needed: u64, cap: u64 },
    #[error("Frobenius power {prime}^{power} exceeds the configured degree cap {cap}")]
    Overflow { prime: u64, power: u32, cap: u64 },
    #[error("Hilbert function has not stabilized: {0}")]
    NotStabilized(String),
    #[error("values are not those of a polynomial of degree <= {degree}")]
    NotPolynomial { degree: usize },
    #[error("leading terms failed to cancel: {0}")]
    CancellationFailure(String),
    #[error("step grids 1/{0} and 1/{1} have no common refinement of either")]
    IncompatibleGrids(u64, u64),
    #[error("step functions are at different levels: {0}")]
    MismatchedLevel(String),
    #[error("invalid HN data: {0}")]
    InvalidHN(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a trinomial: {0}")]
    NotTrinomial(String),
    #[error("regular trinomial matches neither normal form: {0}")]
    Unmatched(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short stable identifier, e.g. `BadPrime`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ModulusTooLarge(_) => "ModulusTooLarge",
            Error::BadPrime { .. } => "BadPrime",
            Error::InfiniteColength { .. } => "InfiniteColength",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::Overflow { .. } => "Overflow",
            Error::NotStabilized(_) => "NotStabilized",
            Error::NotPolynomial { .. } => "NotPolynomial",
            Error::CancellationFailure(_) => "CancellationFailure",
            Error::IncompatibleGrids(..) => "IncompatibleGrids",
            Error::MismatchedLevel(_) => "MismatchedLevel",
            Error::InvalidHN(_) => "InvalidHN",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotTrinomial(_) => "NotTrinomial",
            Error::Unmatched(_) => "Unmatched",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for errors caused by hitting a configured size limit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::DegreeCapExceeded { .. } | Error::Overflow { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
