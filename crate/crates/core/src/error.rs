use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the pipeline can surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("role `{role}` refers to unknown column `{column}`")]
    Role { role: &'static str, column: String },

    #[error("duplicate key ({id}, {time})")]
    DuplicateKey { id: String, time: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("column `{column}` has type {found}, expected {expected}")]
    ColumnType {
        column: String,
        expected: &'static str,
        found: &'static str,
    },

    #[error("metadata matched no measure columns (var_col `{0}`)")]
    EmptyJoin(String),

    #[error("gap in monthly series for `{id}`: missing {missing}")]
    Gap { id: String, missing: String },

    #[error("mapping error: {0}")]
    Mapping(String),

    #[error("{op}: domain violation in `{column}` at {rows:?}")]
    Domain {
        op: &'static str,
        column: String,
        rows: Vec<String>,
    },

    #[error("column `{0}` is constant; cannot scale")]
    ConstantColumn(String),

    #[error("no weight resolved for `{0}`")]
    UnresolvedWeight(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("formula syntax error at byte {pos}: {msg}")]
    FormulaSyntax { pos: usize, msg: String },

    #[error("insufficient sample: n = {n}, need at least {needed}")]
    InsufficientSample { n: usize, needed: usize },

    #[error("{family} fit infeasible: {reason}")]
    FitInfeasible { family: String, reason: String },

    #[error("probability {0} outside the valid range")]
    Probability(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("simplification scheme error: {0}")]
    Scheme(String),

    #[error("benchmark error: {0}")]
    Benchmark(String),

    #[error("recipe `{recipe}` failed for {combo}: {source}")]
    Recipe {
        recipe: String,
        combo: String,
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownColumn(_) => "unknown_column",
            Error::Role { .. } => "role",
            Error::DuplicateKey { .. } => "duplicate_key",
            Error::Schema(_) => "schema",
            Error::ColumnType { .. } => "column_type",
            Error::EmptyJoin(_) => "empty_join",
            Error::Gap { .. } => "gap",
            Error::Mapping(_) => "mapping",
            Error::Domain { .. } => "domain",
            Error::ConstantColumn(_) => "constant_column",
            Error::UnresolvedWeight(_) => "unresolved_weight",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::FormulaSyntax { .. } => "formula_syntax",
            Error::InsufficientSample { .. } => "insufficient_sample",
            Error::FitInfeasible { .. } => "fit_infeasible",
            Error::Probability(_) => "probability",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Scheme(_) => "scheme",
            Error::Benchmark(_) => "benchmark",
            Error::Recipe { .. } => "recipe",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Parse {
            line,
            msg: e.to_string(),
        }
    }
}
