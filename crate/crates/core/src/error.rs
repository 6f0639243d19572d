use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("matrix must be square with t >= 1, got {rows} rows of widths {widths:?}")]
    NotSquare { rows: usize, widths: Vec<usize> },
    #[error("invalid quotient shape: {0}")]
    InvalidShape(String),
    #[error("elementary divisor exponent {exponent} exceeds depth n = {depth}")]
    ExponentExceedsDepth { exponent: String, depth: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no depth n <= {max_n} satisfies alpha < c(n)")]
    SearchExhausted { max_n: u64 },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
