use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("root of unity of order {0} does not lie in Q(zeta_24)")]
    ConductorTooLarge(u64),

    #[error("q-series exponent {0} has denominator not dividing 4")]
    BadExponent(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lattice error: {0}")]
    Lattice(String),

    #[error("finite quadratic module error: {0}")]
    Module(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("{what}: expected {expected}, found {actual}")]
    Mismatch {
        what: String,
        expected: String,
        actual: String,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn mismatch(
        what: impl Into<String>,
        expected: impl std::fmt::Display,
        actual: impl std::fmt::Display,
    ) -> Self {
        Error::Mismatch {
            what: what.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
