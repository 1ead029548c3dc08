use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit pattern 0x{bits:X} does not fit the {width}-bit storage of {format}")]
    WidthMismatch { bits: u128, width: u32, format: String },

    #[error("invalid accumulator config: {0}")]
    InvalidConfig(String),

    #[error("invalid format: {0}")]
    InvalidFormat(String),

    #[error("length mismatch: x has {x} elements, y has {y}")]
    LengthMismatch { x: usize, y: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operand or accumulator is poisoned ({0})")]
    Poisoned(&'static str),

    #[error("unknown kernel id `{0}`")]
    UnknownKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lint: {0}")]
    Lint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
