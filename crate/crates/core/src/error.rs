use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bit index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch for {what}: expected {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("field width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },

    #[error("field width {0} outside supported range 1..=32")]
    UnsupportedWidth(u32),

    #[error("value {value:#x} does not fit in GF(2^{width})")]
    ValueOutOfField { value: u64, width: u32 },

    #[error("division by zero in GF(2^{0})")]
    DivisionByZero(u32),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration budget exceeded: need {required} {unit}, budget is {budget}")]
    BudgetExceeded {
        required: u128,
        budget: u128,
        unit: &'static str,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
