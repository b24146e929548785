use thiserror::Error;

/// Errors raised by the construction library.
///
/// Variants whose name ends in an internal-sounding condition (for example
/// [`Error::CoefficientNotInSubfield`]) indicate a broken invariant rather
/// than bad input; [`Error::is_internal`] reports those.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("division by the zero polynomial")]
    DivideByZero,
    #[error(
        "rational composition undefined: outer fraction has a pole at the constant inner value"
    )]
    UndefinedComposition,
    #[error("degrees {0} and {1} are not coprime")]
    NotCoprimeDegrees(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("field with {0} elements is beyond the point-counting bound")]
    FieldTooLarge(String),
    #[error("gave up after {0} trials")]
    TrialsExhausted(usize),
    #[error("kernel point is not of the announced odd prime order")]
    BadKernel,
    #[error("isogeny chain does not compose: target and source curves differ")]
    ChainMismatch,
    #[error("no rational point of order {0} on an intermediate curve")]
    TorsionNotFound(u64),
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("no root exists for the requested equation")]
    NoRoot,
    #[error("no symmetric function generates the target subfield")]
    NoGenerator,
    #[error("a descended coefficient does not lie in the base subfield")]
    CoefficientNotInSubfield,
    #[error("element belongs to a different algebra")]
    WrongAlgebra,
    #[error("constructed polynomial failed the irreducibility check")]
    VerificationFailed,
    #[error("group order could not be pinned down in the Hasse interval")]
    AmbiguousOrder,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that signal a bug or a broken mathematical
    /// guarantee rather than a problem with the caller's input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::TorsionNotFound(_)
                | Error::NoGenerator
                | Error::CoefficientNotInSubfield
                | Error::VerificationFailed
                | Error::NoRoot
                | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
