use thiserror::Error;

use crate::arith::ArithError;
use crate::ffpoly::OracleError;
use crate::series::SeriesError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{what} requires n >= {min}, got {n}")]
    OutOfRange { what: &'static str, n: usize, min: usize },
    #[error("torus count for {0} is not a polynomial in q")]
    NonPolynomial(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
