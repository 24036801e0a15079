use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown group key {0:?} (expected e.g. Z4, S3, I2(5), B2, trivial)")]
    UnknownGroup(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("malformed orbifold signature {0:?} (expected e.g. \"g=0;2,3,5\")")]
    InvalidSignature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("reflection {element} has a codimension-one fixed space but is not diagonalizable")]
    NonDiagonalizable { element: usize },
    #[error("Dunkl term for reflection {element} is not divisible by its root; reflection data is inconsistent")]
    InexactDunklDivision { element: usize },
    #[error("linear map expected to be invertible is singular: {0}")]
    Singular(String),
}

impl Error {
    /// Usage-type errors are the caller's fault; everything else signals an
    /// internal inconsistency.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownGroup(_)
                | Error::UnsupportedGroup(_)
                | Error::InvalidSignature(_)
                | Error::Precondition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
