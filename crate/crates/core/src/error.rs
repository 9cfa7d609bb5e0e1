use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Why a candidate matrix or weight vector was rejected.
///
/// Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationError {
    #[error("matrix must have at least 3 rows, got {n}")]
    TooSmall { n: usize },
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("declared size {declared} does not match {actual} rows")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("entry ({i}, {j}) is not a finite positive number")]
    NonPositive { i: usize, j: usize },
    #[error("diagonal entry {i} is {value}, expected 1")]
    DiagonalNotOne { i: usize, value: f64 },
    #[error("entries ({i}, {j}) and ({j}, {i}) are not reciprocal: product {product}")]
    NotReciprocal { i: usize, j: usize, product: f64 },
    #[error("weight vector has length {len}, expected {n}")]
    WeightLength { len: usize, n: usize },
    #[error("weight {index} is not a finite positive number")]
    NonPositiveWeight { index: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    Validation(#[from] ValidationError),
    #[error("power iteration did not converge in {iterations} iterations (last step {last_step:e})")]
    Convergence { iterations: usize, last_step: f64 },
    #[error("numerical breakdown in simplex: {0}")]
    Numerical(String),
    #[error("weight vector reproduces every entry; the efficiency LP is empty")]
    ConsistentInput,
    #[error("ratio of items {i} and {j} matches the matrix entry; weakly efficient without solving")]
    EqualityWitness { i: usize, j: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("LP and digraph disagree on {test}: lp_optimum={lp_optimum:e}, graph says {graph_says}")]
    VerdictConflict {
        test: &'static str,
        lp_optimum: f64,
        graph_says: String,
    },
}
