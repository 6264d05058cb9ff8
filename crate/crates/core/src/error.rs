use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    /// Raw input could not be binarized, or a digit is out of the RAM base.
    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("mapping error: {0}")]
    Mapping(String),

    /// A pattern or label does not fit the model it was given to.
    #[error("input error: {0}")]
    Input(String),

    /// The model is in a state that cannot answer the request.
    #[error("model error: {0}")]
    Model(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A mean function was given values outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// None of the accessed regression cells carry information.
    #[error("no information: no trained cell was accessed by the pattern")]
    NoInformation,

    #[error(transparent)]
    Load(#[from] LoadError),
}

/// Failure kinds when reading a model document.
#[derive(Debug, Error, PartialEq)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Parse(String),

    #[error("unsupported format version {0}")]
    Version(u64),

    #[error("unknown model type {0:?}")]
    UnknownType(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("address {address} out of range for a RAM with {capacity} locations")]
    AddressOutOfRange { address: String, capacity: u128 },

    #[error("negative counter {0}")]
    NegativeCounter(String),
}
