use thiserror::Error;

use crate::modes_state::Mode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid black-hole parameters: {0}")]
    InvalidParams(String),

    #[error("Bogoliubov coefficient is zero with a positive exponent")]
    DegenerateCoefficient,

    #[error("invalid scenario: {0}")]
    InvalidSpec(String),

    #[error("mode {0} is not part of the layout")]
    UnknownMode(Mode),

    #[error("coherence at non-complement position ({row:#b}, {col:#b})")]
    NotXState { row: u64, col: u64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("problem size {size} exceeds the cap of {cap}")]
    ScaleCap { size: usize, cap: usize },

    #[error("n = {0} must be even")]
    OddN(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
