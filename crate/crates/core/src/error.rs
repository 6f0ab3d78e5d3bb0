use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the algebra and calculus layers.
///
/// Every operation that can fail reports one of these variants; nothing in
/// the engine panics on user input. Parse errors carry their own positional
/// type in [`crate::dsl`] and wrap an `Error` when the problem is semantic
/// rather than syntactic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Division of a rational function by the zero function.
    #[error("division by zero")]
    DivisionByZero,

    /// A variable name that is not part of the ambient variable list.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// The same name appears twice in a variable list.
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    /// Evaluation or substitution hit a vanishing denominator.
    #[error("pole: {0}")]
    PoleAtPoint(String),

    /// Two objects live over different variable lists or dimensions.
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    /// A form has the wrong degree for the requested operation.
    #[error("degree error: {0}")]
    Degree(String),

    /// A map or coefficient list has the wrong number of entries.
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    /// A witness was requested for a form that is not closed.
    #[error("form is not closed")]
    NotClosed,

    /// Exactness cannot be decided by the polynomial witness construction.
    #[error("witness undecided: {0}")]
    WitnessUndecided(String),

    /// A numeric parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
