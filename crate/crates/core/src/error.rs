use thiserror::Error;

/// Errors surfaced by the solver and the textual formats.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("variable `{0}` has no assigned value")]
    MissingAssignment(String),

    #[error("operands are defined over different variable scopes")]
    ScopeMismatch,

    #[error("theta vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("integer variable `{0}` is unbounded; no finite enumeration box exists")]
    UnboundedInteger(String),

    #[error("integer enumeration needs {needed} assignments, cap is {cap}")]
    EnumerationBudgetExceeded { needed: u128, cap: u64 },

    #[error("game has {players} players, operation capped at {cap}")]
    PlayerLimitExceeded { players: usize, cap: usize },

    #[error("time limit exceeded")]
    TimeLimitExceeded,

    #[error("constrained game is not TU-reducible: {0}")]
    NotTuReducible(String),

    #[error("the game has no imputation")]
    EmptyImputationSet,

    #[error("lambda weights must be strictly positive")]
    NonpositiveLambda,

    #[error("invalid game specification: {0}")]
    SpecInvalid(String),

    #[error("formula is not in 3-CNF: {0}")]
    NotThreeCnf(String),

    #[error("quantifier prefix does not match the required shape: {0}")]
    BadPrefix(String),

    #[error("formula has {0} variables, brute-force oracle capped at {1}")]
    TooManyVariables(usize, usize),

    #[error("unbound variable `{0}` in formula")]
    UnboundVariable(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
