use thiserror::Error;

/// Errors raised by the numerical and exact routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series with vanishing leading coefficient")]
    DivisionByZero,
    #[error("series precisions do not overlap")]
    EmptyPrecision,
    #[error("series have incompatible prefactors q^({0}/24) and q^({1}/24)")]
    IncompatiblePrefactor(i64, i64),
    #[error("{0} is not a discriminant (must be nonzero and 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("tolerance {tol:e} unreachable: {reason}")]
    ToleranceUnreachable { tol: f64, reason: String },
    #[error("evaluation modes disagree: {a} vs {b}")]
    ModeDisagreement { a: String, b: String },
    #[error("eta quotient does not have trivial multiplier: {0}")]
    NontrivialMultiplier(String),
    #[error("no value coprime to {d} represented by {form} within the search bound")]
    NoRepresentation { d: i64, form: String },
    #[error("near-integer check failed: {0}")]
    RoundingFailure(String),
    #[error("precision escalation exhausted at {bits} bits")]
    PrecisionExhausted { bits: usize },
    #[error("genus character vanishes on every class of discriminant {0}")]
    TrivialCharacter(i64),
    #[error("spanning failure: {0}")]
    SpanningFailure(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("prime {p} divides {d}")]
    PrimeDividesDiscriminant { p: u64, d: i64 },
    #[error("leading coefficient must be exactly 1")]
    LeadingCoefficient,
    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),
    #[error("unexpected growth in the tail window: {0}")]
    TailGrowth(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
