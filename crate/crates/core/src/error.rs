use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at point {point}")]
    PoleAtPoint { point: String },
    #[error("jet has zero constant term")]
    ZeroConstantTerm,
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("domain violation at point {point}")]
    DomainViolation { point: String },
    #[error("fusion coefficient is not a single semigeometric operator: {0}")]
    NotExtractable(String),
    #[error("element is not in the Fock subring: {0}")]
    NotInFockSubring(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not a product of linear factors in z: {0}")]
    NotDivisorForm(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
