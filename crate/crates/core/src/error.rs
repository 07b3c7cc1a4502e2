use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A matrix could not be turned into the requested structure.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("cannot normalize a vector without a positive entry")]
    Normalization,

    #[error("degenerate budget: {0}")]
    DegenerateBudget(String),

    /// Dimension mismatch or malformed linear program.
    #[error("model error: {0}")]
    Model(String),

    #[error("numeric check failed: {what} (gap {gap:e})")]
    Numeric { what: String, gap: f64 },

    #[error("linear program is {0}")]
    Solver(crate::lp::Status),

    /// Budgets that cannot describe a non-empty uncertainty set.
    #[error("uncertainty set definition: {0}")]
    SetDefinition(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) => 2,
            Error::Parse { .. } => 3,
            Error::Io(_) => 4,
            Error::Construction(_) => 5,
            Error::Convergence { .. } => 6,
            Error::Normalization => 7,
            Error::DegenerateBudget(_) => 8,
            Error::Model(_) | Error::Solver(_) => 9,
            Error::Numeric { .. } => 10,
            Error::SetDefinition(_) => 11,
        }
    }
}
