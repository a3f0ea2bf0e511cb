use thiserror::Error;

/// Errors shared by every engine and by the composer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be nonzero")]
    InvalidModulus,

    #[error("invalid prime: {0}")]
    InvalidPrime(String),

    #[error("p-adic split of 0 is undefined; route to the lambda = 0 formulas instead")]
    ZeroValuation,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exact value too large: about {digits10} decimal digits exceeds the {limit_bits}-bit render limit")]
    TooLarge { digits10: String, limit_bits: u64 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("cannot factor {0}: trial division and rho-cycle budgets exhausted")]
    FactorGiveUp(String),

    #[error("numerical instability: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to.
    /// 2 = usage/parse/range, 3 = budget or size refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TooLarge { .. } | Error::Budget(_) | Error::FactorGiveUp(_) => 3,
            _ => 2,
        }
    }
}
