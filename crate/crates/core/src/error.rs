use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hyperplanes are not in general position")]
    NotGeneralPosition,
    #[error("table is not a standard parameter: {0}")]
    NotStandardParameter(String),
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    /// A mathematical precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
