//! Error type shared by every module in the crate.

use num_bigint::BigUint;
use std::path::PathBuf;

/// Everything that can go wrong across the arithmetic core, the analysis
/// pipelines, and the scan harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// `C(n, v)` with `v > n` is outside the series domain.
    #[error("binomial coefficient C({n}, {v}) is undefined: index {v} exceeds {n}")]
    BinomialIndex { n: u32, v: u32 },

    /// Modular operations need a modulus of at least 2.
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigUint),

    /// The valuation of zero is unbounded.
    #[error("valuation of zero is undefined")]
    ZeroValuation,

    /// Valuations are taken with respect to a base of at least 2.
    #[error("valuation base must be at least 2, got {0}")]
    ValuationBaseTooSmall(BigUint),

    /// `gcd(0, 0)` has no well-defined value.
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    /// Series instances require strictly positive summands.
    #[error("summands must be strictly positive")]
    ZeroSummand,

    /// Series exponents start at 2; below that the series is empty.
    #[error("exponent must be at least 2, got {0}")]
    ExponentTooSmall(u32),

    /// Every summand is divisible by the exponent, so no residue case
    /// applies; shared factors of the exponent must be handled upstream.
    #[error("all summands are divisible by the exponent {n}; the residue cases do not apply")]
    AllSummandsDivisible { n: u32 },

    /// An operation that requires a prime modulus was handed a composite.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// `(x^(p-1) - 1)/p` requires `x` to be a unit modulo `p`.
    #[error("{x} is divisible by {p}, so the Fermat quotient is undefined")]
    QuotientUndefined { x: BigUint, p: u32 },

    /// A scan configuration failed validation.
    #[error("invalid scan configuration: {0}")]
    BadScanConfig(String),

    /// Two independent computation routes disagreed. This indicates a bug
    /// and is never expected on valid inputs.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    /// File-level failure while writing or reading records.
    #[error("{path}: {source} (after {records} records)")]
    Io {
        path: PathBuf,
        records: u64,
        #[source]
        source: std::io::Error,
    },

    /// A persisted record could not be parsed back.
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
