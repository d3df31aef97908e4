use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants split into two families: input errors (bad primes, malformed
/// matrices or complexes, unsupported oracle cases) and internal
/// consistency failures ([`Error::Inconsistent`]), which indicate a bug in
/// the computation rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("characteristic must be 0 or a prime (got {0})")]
    BadCharacteristic(u64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),

    #[error("matrix does not satisfy A^{p} = I; A^{p} is\n{power}")]
    WrongOrder { p: u32, power: String },

    #[error("composition of coboundaries is nonzero: {0}")]
    MalformedComplex(String),

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("action is not regular: {0}")]
    NotRegular(String),

    #[error("complex has {simplices} simplices, above the integral limit of {limit}; use field mode")]
    SizeGate { simplices: usize, limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure in {context}: {detail}")]
    Inconsistent { context: String, detail: String },
}

impl Error {
    pub(crate) fn inconsistent(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Inconsistent {
            context: context.into(),
            detail: detail.into(),
        }
    }

    /// True for failures that signal a bug in the library rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
