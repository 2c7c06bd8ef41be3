use thiserror::Error;

/// Errors raised by the algebra, discretization and assembly layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left} vs {right}")]
    Shape {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("matrix is numerically singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("point {x} lies outside the domain [{a}, {b}]")]
    Domain { x: f64, a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(op: &'static str, left: impl ToString, right: impl ToString) -> Error {
    Error::Shape {
        op,
        left: left.to_string(),
        right: right.to_string(),
    }
}
