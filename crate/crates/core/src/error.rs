use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("order {order} exceeds the table cap {cap}")]
    CapExceeded { order: usize, cap: usize },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("group is not abelian")]
    NotAbelian,

    #[error("subgroup is not a complement: {0}")]
    NotAComplement(String),

    #[error("invalid invariant factors: {0}")]
    InvalidFactors(String),

    #[error("no isomorphism witness found: {0}")]
    WitnessNotFound(String),

    #[error("value is not a character: {0}")]
    NotACharacter(String),

    #[error("subset is not an ideal")]
    NotAnIdeal,

    #[error("element is zero")]
    ZeroElement,

    #[error("{m2} does not divide {m1}")]
    NotADivisor { m1: usize, m2: usize },

    #[error("flags outside hypothesis: {0}")]
    InvalidFlags(String),

    #[error("limits exceeded: {0}")]
    LimitsExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
