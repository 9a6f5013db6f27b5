use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("base {base} is not coprime to modulus {modulus}")]
    NotCoprime { base: BigUint, modulus: BigUint },

    #[error("parameter out of range: t[{index}] = {t} not in [1, {exponent}]")]
    ParameterOutOfRange { index: usize, t: u32, exponent: u32 },

    #[error("inverse pair table too short: need index {needed}, have {len} entries")]
    Index { needed: u64, len: usize },

    #[error("matrix dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not invertible modulo {0}")]
    NonInvertibleMatrix(BigUint),

    #[error("unsupported prime {0}: the Gaussian variant requires an odd prime congruent to 3 mod 4")]
    UnsupportedPrime(BigUint),

    #[error("{re}+{im}*i is not a unit: its norm is divisible by {p}")]
    NotUnit { re: BigUint, im: BigUint, p: BigUint },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("clock unavailable or too coarse: {0}")]
    ClockUnavailable(String),

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error("residue mismatch between strategies: {0}")]
    ResidueMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse grouping used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Mathematically invalid request (non-coprime base, singular matrix, ...).
    Domain,
    /// Malformed or out-of-range input.
    Validation,
    /// Memory/size caps, I/O, clock failures.
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_)
            | Error::NotCoprime { .. }
            | Error::NonInvertibleMatrix(_)
            | Error::UnsupportedPrime(_)
            | Error::NotUnit { .. }
            | Error::ResidueMismatch(_) => ErrorKind::Domain,
            Error::Parse(_)
            | Error::InvalidFactorization(_)
            | Error::ParameterOutOfRange { .. }
            | Error::Index { .. }
            | Error::DimensionMismatch(..)
            | Error::DegenerateFit(_)
            | Error::UnknownStrategy(_) => ErrorKind::Validation,
            Error::Resource(_) | Error::ClockUnavailable(_) | Error::Io(_) => ErrorKind::Resource,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
