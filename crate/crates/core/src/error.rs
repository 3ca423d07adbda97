use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual or structured input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("empty polytope: the support data does not bound a nonempty region")]
    EmptyPolytope,

    #[error("unbounded region: the fan rays do not positively span the ambient space")]
    Unbounded,

    #[error("divisor is not ample: {0}")]
    NotAmple(String),

    #[error("eigenvalues are real: {0}")]
    RealEigenvalues(String),

    #[error("root refinement failed: {0}")]
    PrecisionFailure(String),

    #[error("enclosure too coarse to attribute the cyclotomic root; retry at higher precision ({0} bits tried)")]
    EnclosureTooCoarse(u32),

    #[error("uncertifiable strict modulus gap at {0} bits")]
    UncertifiableGap(u32),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("insufficient terms: {0}")]
    InsufficientTerms(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("coordinate size guard exceeded: {0} digits")]
    SizeGuard(usize),

    #[error("no recurrence of order <= {0} verifies on the available terms")]
    NoRecurrence(usize),

    #[error("series not invertible: {0}")]
    NotInvertible(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a violated
    /// mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Dimension(_) | Error::OutOfRange(_))
    }
}
