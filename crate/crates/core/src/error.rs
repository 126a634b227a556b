use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid site (n={n}, tau={tau}): tau must be at least 1")]
    InvalidSite { n: i64, tau: i64 },

    #[error("site (n={n}, tau={tau}) is not reachable by any checker path")]
    Unreachable { n: i64, tau: i64 },

    #[error("site (n={n}, tau={tau}) is outside the domain of {what}")]
    OutsideDomain { n: i64, tau: i64, what: &'static str },

    #[error("tau={tau} exceeds the {kind} limit of {limit}")]
    LimitExceeded { kind: &'static str, tau: i64, limit: i64 },

    #[error("exact mode requires a rational mass")]
    InexactMass,

    #[error("invalid mass {0:?}: expected a nonnegative `p/q` rational or decimal")]
    InvalidMass(String),

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("the mass must be positive here")]
    Massless,

    #[error("this check is only defined for mass 1")]
    MassNotOne,

    #[error("bypass set must not contain the origin (0, 0)")]
    OriginInBypass,

    #[error("malformed bypass set: {0}")]
    MalformedBypass(String),

    #[error("bypass set is not blocking: some checker path avoids it forever")]
    NonBlocking,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
