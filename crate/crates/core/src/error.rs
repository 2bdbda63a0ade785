use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("field of size {p}^{s} exceeds the supported 2^24 elements")]
    FieldTooLarge { p: u32, s: u32 },
    #[error("invalid subfield: {0}")]
    InvalidSubfield(String),
    #[error("operands live over different fields")]
    CtxMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element index {0} is outside the field")]
    ElementOutOfRange(u32),
    #[error("support has a repeated entry at position {0}")]
    RepeatedSupport(usize),
    #[error("multiplier has a zero entry at position {0}")]
    ZeroMultiplier(usize),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("parameter domain: {0}")]
    ParamDomain(String),
    #[error("Goppa polynomial vanishes on support position {0}")]
    GammaVanishesOnSupport(usize),
    #[error("generator matrix has rank {rank} < {rows} rows")]
    NotSystematizable { rank: usize, rows: usize },
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
