//! Fermat-quotient machinery for prime exponents: the mu quantities, the
//! exact unfolding `U(a, b) = p * M`, the exceptional-pair criterion, and
//! searches for primes whose quotient congruence degenerates (base^(p-1)
//! congruent to 1 modulo higher powers of p).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::binomial::{self, CaseKind};
use crate::exact;
use crate::{Error, Result};

fn require_prime(p: u32) -> Result<()> {
    if exact::is_prime_u64(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}

/// `mu_x = (x^p - x) / p` for prime `p`. Defined for every natural `x`;
/// the division is exact by Fermat's little theorem.
pub fn mu(x: &BigUint, p: u32) -> Result<BigUint> {
    require_prime(p)?;
    let numerator = exact::pow_exact(x, p) - x;
    let (q, r) = numerator.div_rem(&BigUint::from(p));
    if !r.is_zero() {
        return Err(Error::Inconsistency(format!(
            "x^p - x not divisible by the prime p: x={x} p={p}"
        )));
    }
    Ok(q)
}

/// The Fermat quotient `q_p(x) = (x^(p-1) - 1) / p` for prime `p` and
/// `x` not divisible by `p`.
pub fn fermat_quotient(x: &BigUint, p: u32) -> Result<BigUint> {
    require_prime(p)?;
    if (x % BigUint::from(p)).is_zero() {
        return Err(Error::QuotientUndefined { x: x.clone(), p });
    }
    let numerator = exact::pow_exact(x, p - 1) - BigUint::one();
    let (q, r) = numerator.div_rem(&BigUint::from(p));
    if !r.is_zero() {
        return Err(Error::Inconsistency(format!(
            "x^(p-1) - 1 not divisible by the prime p: x={x} p={p}"
        )));
    }
    Ok(q)
}

/// The mu quantities of `a`, `b`, and `a + b`, with their signed difference
/// `M = mu_(a+b) - mu_a - mu_b` — the exact cofactor of `p` in the series:
/// `(a + b)^p - a^p - b^p = p * M` identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTriple {
    pub p: u32,
    pub mu_a: BigUint,
    pub mu_b: BigUint,
    /// `mu_(a+b)`.
    pub mu_sum: BigUint,
    /// `M = mu_(a+b) - mu_a - mu_b`.
    pub combination: BigInt,
}

/// Compute the mu triple of `(a, b)` at prime `p` and confirm the unfolding
/// `U(a, b) = p * M` against an independent evaluation of the series.
pub fn combination(a: &BigUint, b: &BigUint, p: u32) -> Result<QuotientTriple> {
    require_prime(p)?;
    let mu_a = mu(a, p)?;
    let mu_b = mu(b, p)?;
    let mu_sum = mu(&(a + b), p)?;
    let m = BigInt::from(mu_sum.clone()) - BigInt::from(mu_a.clone()) - BigInt::from(mu_b.clone());
    let series = BigInt::from(binomial::series_power_form(a, b, p));
    if series != BigInt::from(p) * &m {
        return Err(Error::Inconsistency(format!(
            "series does not equal p * M: a={a} b={b} p={p}"
        )));
    }
    Ok(QuotientTriple {
        p,
        mu_a,
        mu_b,
        mu_sum,
        combination: m,
    })
}

/// Outcome of the exceptional-pair test at a prime exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalCheck {
    pub triple: QuotientTriple,
    /// `M mod p`.
    pub residue: BigUint,
    /// True iff `M` is divisible by `p`, equivalently iff `p^2 | U(a, b)`.
    pub exceptional: bool,
    /// Whether the gcd-reduced pair classifies as residue case 3 under `p`
    /// (the case for which the criterion is the interesting test).
    pub is_case3: bool,
}

/// Run the exceptional-pair criterion: `p^2 | U(a, b)` iff `M = 0 mod p`.
///
/// Requires `a, b >= 1` and prime `p`. The `is_case3` flag warns when the
/// pair does not actually sit in the generic residue case.
pub fn exceptional_criterion(a: &BigUint, b: &BigUint, p: u32) -> Result<ExceptionalCheck> {
    let triple = combination(a, b, p)?;
    let p_big = BigInt::from(p);
    let residue = triple
        .combination
        .mod_floor(&p_big)
        .to_biguint()
        .expect("mod_floor of a positive modulus is non-negative");
    let exceptional = residue.is_zero();
    let inst = binomial::normalize(a.clone(), b.clone(), p)?;
    let dec = binomial::decompose(&inst);
    let is_case3 = matches!(
        binomial::classify(&dec, p),
        Ok(label) if label.kind == CaseKind::Case3
    );
    Ok(ExceptionalCheck {
        triple,
        residue,
        exceptional,
        is_case3,
    })
}

/// A prime whose quotient congruence holds modulo `p^max_power`, found while
/// scanning with some threshold `min_power <= max_power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WieferichHit {
    pub base: u64,
    pub prime: u64,
    /// Largest verified `r'` with `base^(p-1) = 1 mod p^r'`, probed no
    /// further than two levels above the scan threshold.
    pub max_power: u32,
}

/// Test one odd prime against the congruence `base^(p-1) = 1 mod p^min_power`.
fn check_prime(base: u64, p: u64, min_power: u32) -> Option<WieferichHit> {
    if base % p == 0 {
        return None;
    }
    let p_big = BigUint::from(p);
    let base_big = BigUint::from(base);
    let exp = BigUint::from(p - 1);
    let modulus = exact::pow_exact(&p_big, min_power);
    if base_big.modpow(&exp, &modulus) != BigUint::one() {
        return None;
    }
    let mut max_power = min_power;
    while max_power < min_power + 2 {
        let next = exact::pow_exact(&p_big, max_power + 1);
        if base_big.modpow(&exp, &next) == BigUint::one() {
            max_power += 1;
        } else {
            break;
        }
    }
    Some(WieferichHit {
        base,
        prime: p,
        max_power,
    })
}

fn collect_hits(primes: &[u64], base: u64, min_power: u32) -> Vec<WieferichHit> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        primes
            .par_iter()
            .filter_map(|&p| check_prime(base, p, min_power))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        primes
            .iter()
            .filter_map(|&p| check_prime(base, p, min_power))
            .collect()
    }
}

/// Scan all odd primes `p <= p_limit` for `base^(p-1) = 1 mod p^min_power`.
///
/// Hits come back in ascending prime order. Requires `min_power >= 1`
/// (at `min_power = 1` the congruence is Fermat's little theorem, so every
/// odd prime not dividing the base is a hit).
pub fn wieferich_scan(base: u64, p_limit: u64, min_power: u32) -> Vec<WieferichHit> {
    assert!(min_power >= 1, "power threshold must be at least 1");
    let primes: Vec<u64> = exact::primes_up_to(p_limit)
        .into_iter()
        .filter(|&p| p != 2)
        .collect();
    collect_hits(&primes, base, min_power)
}

/// [`wieferich_scan`] restricted to odd primes in `lo ..= hi`; scanning a
/// partition of `2 ..= p_limit` slice by slice and concatenating gives
/// exactly the full scan's hits.
pub fn wieferich_scan_in(base: u64, lo: u64, hi: u64, min_power: u32) -> Vec<WieferichHit> {
    assert!(min_power >= 1, "power threshold must be at least 1");
    let primes: Vec<u64> = exact::primes_up_to(hi)
        .into_iter()
        .filter(|&p| p != 2 && p >= lo)
        .collect();
    collect_hits(&primes, base, min_power)
}

/// Sequential reference scan, compiled unconditionally; the parallel route
/// must produce the identical hit list.
pub fn wieferich_scan_seq(base: u64, p_limit: u64, min_power: u32) -> Vec<WieferichHit> {
    assert!(min_power >= 1, "power threshold must be at least 1");
    exact::primes_up_to(p_limit)
        .into_iter()
        .filter(|&p| p != 2)
        .filter_map(|p| check_prime(base, p, min_power))
        .collect()
}

/// Variant that also probes `p = 2` (whose congruence `base^1 = 1 mod 2^r`
/// just measures how close an odd base is to 1 two-adically).
pub fn wieferich_scan_including_two(base: u64, p_limit: u64, min_power: u32) -> Vec<WieferichHit> {
    assert!(min_power >= 1, "power threshold must be at least 1");
    let primes = exact::primes_up_to(p_limit);
    collect_hits(&primes, base, min_power)
}
