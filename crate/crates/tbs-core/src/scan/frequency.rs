//! How often the generic residue case picks up an extra factor of the
//! prime: counts of case-3 pairs versus exceptional pairs over a square
//! range.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::binomial::{self, CaseKind, Valuation};
use crate::exact;
use crate::{Error, Result};

/// Exceptional-pair statistics for one prime over `[1, bound]^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrequencySummary {
    pub p: u32,
    pub bound: u64,
    /// Ordered coprime pairs classified as residue case 3.
    pub case3_pairs: u64,
    /// Of those, pairs whose series is divisible by `p^2`.
    pub exceptional: u64,
    /// `exceptional / case3_pairs` in lowest terms (`(0, 1)` when there is
    /// nothing to count).
    pub ratio: (u64, u64),
}

/// Count case-3 and exceptional pairs for prime `p` over all ordered
/// coprime pairs `(a, b)` in `[1, bound]^2`.
///
/// Exceptionality is decided modulo `p^2` (the capped valuation route with
/// cap 1), which is exactly the criterion `p^2 | U(a, b)`.
pub fn frequency_report(p: u32, bound: u64) -> Result<FrequencySummary> {
    if !exact::is_prime_u64(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if bound < 1 {
        return Err(Error::BadScanConfig("frequency bound must be positive".into()));
    }
    let mut case3_pairs = 0u64;
    let mut exceptional = 0u64;
    for a in 1..=bound {
        for b in 1..=bound {
            if exact::gcd_u64(a, b)? != 1 {
                continue;
            }
            let inst = binomial::normalize(BigUint::from(a), BigUint::from(b), p)?;
            let dec = binomial::decompose(&inst);
            let case = binomial::classify(&dec, p)?;
            if case.kind != CaseKind::Case3 {
                continue;
            }
            case3_pairs += 1;
            if matches!(binomial::valuation_capped(&inst, 1), Valuation::AtLeast(_)) {
                exceptional += 1;
            }
        }
    }
    let ratio = if case3_pairs == 0 {
        (0, 1)
    } else {
        let g = exceptional.gcd(&case3_pairs);
        (exceptional / g, case3_pairs / g)
    };
    Ok(FrequencySummary {
        p,
        bound,
        case3_pairs,
        exceptional,
        ratio,
    })
}
