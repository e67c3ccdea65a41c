use thiserror::Error;

/// Errors raised by lattice construction, operators, search, tracking and
/// circuit compilation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} out of range (must be < {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operator not defined for this mode: {0}")]
    Mode(String),
    #[error("dimension {dim} exceeds the dense limit of {limit}")]
    Size { dim: usize, limit: usize },
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("labels collide: marks at epochs {first} and {second} both use layer {layer}")]
    LabelCollision {
        first: usize,
        second: usize,
        layer: usize,
    },
    #[error("unsupported in circuit form: {0}")]
    Unsupported(String),
    #[error("qasm parse error at line {line}: {message}")]
    Qasm { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
