use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    Input(String),
    /// Division by zero and similar arithmetic failures.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    /// A cotangent pole was hit (`n * alpha` integral).
    #[error("pole: {0}")]
    Pole(String),
    /// `eta^(2m-2) = 1`, so the closed form is undefined.
    #[error("degenerate unit: eta^{0} = 1")]
    DegenerateUnit(u32),
    /// An invariant that the mathematics guarantees was violated.
    #[error("internal contradiction: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
