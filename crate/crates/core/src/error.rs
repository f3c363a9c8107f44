use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("stencil expects {expected} samples, got {got}")]
    StencilWidth { expected: usize, got: usize },

    #[error("unsupported stencil: order {order}, accuracy {accuracy}")]
    UnsupportedStencil { order: usize, accuracy: usize },

    #[error("stencil step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("non-finite {what} at {at}")]
    NonFinite { what: &'static str, at: f64 },

    #[error("quadrature needs n >= 2, got {0}")]
    TooFewIntervals(usize),

    #[error("Hirota operator of total order {requested} exceeds jet order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("invalid solution spec: {0}")]
    InvalidSpec(String),

    #[error("unknown case `{name}`; valid cases: {valid}")]
    UnknownCase { name: String, valid: String },

    #[error("grid needs at least {min} samples per axis, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("window entirely singular")]
    WindowSingular,

    #[error("field `{0}` needs derived auxiliaries")]
    MissingAuxiliaries(&'static str),

    #[error("profile family `{0}` cannot be serialized")]
    NotSerializable(String),

    #[error("config parse error: {0}")]
    Config(String),

    #[error("csv parse error on line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
