use thiserror::Error;

/// Errors raised when inputs violate the arithmetic constraints of a type or operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("{0} is not a power of an odd prime")]
    InvalidPrimePower(u64),
    #[error("field of size {p}^{f} is outside the supported range")]
    FieldTooLarge { p: u64, f: u32 },
    #[error("{k} does not divide {of}")]
    NotADivisor { k: u64, of: u64 },
    #[error("elements live in different fields (F_{left} vs F_{right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("ramification index {e} is divisible by the residue characteristic {p}")]
    WildRamification { e: u32, p: u64 },
    #[error("exponent {k} is not regular for (q={q}, m={m})")]
    NotRegular { q: u64, m: u32, k: u64 },
    #[error("enumeration over {size} elements exceeds the supported bound")]
    TooLarge { size: u128 },
    #[error("{0}")]
    Constraint(String),
    #[error("independent computations disagree: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn constraint<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Constraint(msg.into()))
}
