use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not congruent to 0 or 1 mod 4")]
    NotDiscriminant(String),
    #[error("hilbert symbol needs nonzero arguments")]
    ZeroArgument,
    #[error("factorization bound exceeded: {n} has a prime factor above {bound}")]
    FactorBoundExceeded { n: String, bound: u64 },
    #[error("p-adic domain error: {0}")]
    PadicDomain(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not positive semidefinite")]
    Indefinite,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("non-integer character sum at X^{degree}")]
    NonIntegerCharacterSum { degree: usize },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("insufficient index bound: {0}")]
    InsufficientIndexBound(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("local polynomial out of oracle range: {0}")]
    LocalPolynomialOutOfRange(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("denominator not cleared: {0}")]
    DenominatorNotCleared(String),
    #[error("p divides an interpolation denominator: {0}")]
    PDividesDenominator(String),
    #[error("character excluded: {0}")]
    ExcludedCharacter(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by bounds or scope rather than malformed input.
    pub fn is_scope(&self) -> bool {
        matches!(
            self,
            Error::FactorBoundExceeded { .. }
                | Error::BoundExceeded(_)
                | Error::OutOfScope(_)
                | Error::LocalPolynomialOutOfRange(_)
                | Error::InsufficientIndexBound(_)
                | Error::ExcludedCharacter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
