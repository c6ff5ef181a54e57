use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field of order {p}^{k} exceeds the supported size {limit}")]
    FieldTooLarge { p: u64, k: u32, limit: u64 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus is reducible over F_{p}: factor {factor:?}")]
    ReducibleModulus { p: u64, factor: Vec<u32> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("weight precondition violated: {0}")]
    WeightPrecondition(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("not a BT_1 Dieudonne module: {0}")]
    NotBt1(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("canonical filtration failed: {0}")]
    Filtration(String),

    #[error("element is not a unit: {0}")]
    NotUnit(String),

    #[error("malformed section: {0}")]
    MalformedSection(String),

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
