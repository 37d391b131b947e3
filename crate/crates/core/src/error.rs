use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse failure at row {row}, column {col:?}: {value:?}")]
    Parse { row: usize, col: String, value: String },

    #[error("non-finite value at ({row}, {col:?})")]
    NonFinite { row: usize, col: String },

    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("dataset has no environment labels")]
    NoEnvironments,

    #[error("unknown environment {0:?}")]
    UnknownEnvironment(String),

    #[error("environment {tag:?} has {count} row(s); at least 2 are required")]
    TooFewEnvironmentRows { tag: String, count: usize },

    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(usize),

    #[error("at least 2 variables are required, got {0}")]
    TooFewVariables(usize),

    #[error("degenerate response: the response column is constant")]
    DegenerateResponse,

    #[error("conditioning explains response ranks exactly (zero denominator)")]
    ZeroDenominator,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid column selection: {0}")]
    InvalidSelection(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph contains a cycle through {0:?}")]
    Cyclic(String),

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("expression error: {0}")]
    Expr(String),

    #[error("invalid DAG spec: {0}")]
    Spec(String),

    #[error("equation for node {0:?} produced a non-finite value")]
    NonFiniteEquation(String),

    #[error("unknown builtin model {0:?}")]
    UnknownBuiltin(String),

    #[error("inconsistent boundary layers: {0}")]
    InconsistentLayers(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
