//! Arbitrary-precision building blocks: binomial coefficients, exact and
//! modular powers, base-`n` valuations, gcd, primality, and a prime sieve.
//!
//! Everything here is exact integer arithmetic — no floating point anywhere.
//! The rest of the crate treats this module as its trusted foundation, so the
//! routines are kept deliberately simple and direct.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Binomial coefficient `C(n, v)`, by the multiplicative rule.
///
/// Every intermediate division is exact: after the `i`-th step the
/// accumulator holds `C(n, i+1)`, an integer. Errors when `v > n`.
pub fn binom(n: u32, v: u32) -> Result<BigUint> {
    if v > n {
        return Err(Error::BinomialIndex { n, v });
    }
    let v = v.min(n - v);
    let mut acc = BigUint::one();
    for i in 0..v {
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

/// `base^exp` by exact arithmetic. `x^0 = 1` for every `x`, including zero.
pub fn pow_exact(base: &BigUint, exp: u32) -> BigUint {
    base.pow(exp)
}

/// `base^exp mod modulus` by square-and-multiply.
///
/// Errors when the modulus is below 2; never materializes `base^exp`.
pub fn pow_mod(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if *modulus < BigUint::from(2u32) {
        return Err(Error::ModulusTooSmall(modulus.clone()));
    }
    Ok(base.modpow(exp, modulus))
}

/// Exact base-`base` valuation of `x`: the largest `k` with `base^k | x`.
///
/// Divide-and-count; errors on `x = 0` (unbounded) and `base < 2`.
pub fn valuation(x: &BigUint, base: &BigUint) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if *base < BigUint::from(2u32) {
        return Err(Error::ValuationBaseTooSmall(base.clone()));
    }
    let mut k = 0u32;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(base);
        if !r.is_zero() {
            return Ok(k);
        }
        k += 1;
        rest = q;
    }
}

/// Greatest common divisor. Errors only on `gcd(0, 0)`.
pub fn gcd(a: &BigUint, b: &BigUint) -> Result<BigUint> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    Ok(a.gcd(b))
}

/// `gcd` over machine words, for the scan hot path. Errors on `gcd(0, 0)`.
pub fn gcd_u64(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdOfZeros);
    }
    Ok(a.gcd(&b))
}

/// Witness list that makes Miller–Rabin deterministic for every `u64`.
const MILLER_RABIN_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin primality test over `u64`.
///
/// The fixed witness set is exact (not probabilistic) for the whole `u64`
/// range, so this function never misclassifies.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MILLER_RABIN_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n is odd and > 37 here; write n - 1 = d * 2^s with d odd.
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &MILLER_RABIN_BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality over arbitrary-precision naturals.
///
/// Inputs that fit a `u64` use the deterministic word-sized test; larger
/// inputs run Miller–Rabin with the same fixed witness set via modular
/// exponentiation. Every value this crate actually tests fits in `u64`.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MILLER_RABIN_BASES {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit`, ascending, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut multiple = p * p;
        while multiple <= limit {
            composite[multiple] = true;
            multiple += p;
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(7, 3).unwrap(), big(35));
        assert_eq!(binom(0, 0).unwrap(), big(1));
        assert_eq!(binom(5, 0).unwrap(), big(1));
        assert_eq!(binom(5, 5).unwrap(), big(1));
        assert_eq!(binom(10, 1).unwrap(), big(10));
        assert_eq!(binom(52, 5).unwrap(), big(2_598_960));
    }

    #[test]
    fn binom_rejects_index_above_n() {
        assert!(matches!(
            binom(3, 4),
            Err(Error::BinomialIndex { n: 3, v: 4 })
        ));
    }

    #[test]
    fn binom_matches_pascal_recurrence_up_to_30() {
        // Independent route: build Pascal's triangle by addition only.
        let mut row: Vec<BigUint> = vec![BigUint::one()];
        for n in 0u32..=30 {
            for (v, expected) in row.iter().enumerate() {
                assert_eq!(&binom(n, v as u32).unwrap(), expected, "C({n}, {v})");
            }
            let mut next = vec![BigUint::one()];
            for i in 0..row.len() - 1 {
                next.push(&row[i] + &row[i + 1]);
            }
            next.push(BigUint::one());
            row = next;
        }
    }

    #[test]
    fn binom_row_sums_are_powers_of_two() {
        for n in 0u32..=30 {
            let sum: BigUint = (0..=n).map(|v| binom(n, v).unwrap()).sum();
            assert_eq!(sum, pow_exact(&big(2), n), "row {n}");
        }
    }

    #[test]
    fn pow_exact_small_values() {
        assert_eq!(pow_exact(&big(2), 10), big(1024));
        assert_eq!(pow_exact(&big(3), 0), big(1));
        assert_eq!(pow_exact(&big(0), 0), big(1));
        assert_eq!(pow_exact(&big(0), 5), big(0));
        assert_eq!(pow_exact(&big(10), 20), BigUint::parse_bytes(b"100000000000000000000", 10).unwrap());
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(&big(2), &big(10), &big(1000)).unwrap(), big(24));
        assert_eq!(pow_mod(&big(3), &big(10), &big(121)).unwrap(), big(1));
        assert_eq!(pow_mod(&big(5), &big(0), &big(7)).unwrap(), big(1));
    }

    #[test]
    fn pow_mod_rejects_tiny_modulus() {
        assert!(matches!(
            pow_mod(&big(2), &big(3), &big(1)),
            Err(Error::ModulusTooSmall(_))
        ));
        assert!(matches!(
            pow_mod(&big(2), &big(3), &big(0)),
            Err(Error::ModulusTooSmall(_))
        ));
    }

    #[test]
    fn pow_mod_agrees_with_exact_reduction_exhaustively() {
        // b, e <= 20, m in 2..=1000: compare against the materialized power.
        for b in 0u64..=20 {
            for e in 0u32..=20 {
                let full = pow_exact(&big(b), e);
                for m in 2u64..=1000 {
                    let modulus = big(m);
                    assert_eq!(
                        pow_mod(&big(b), &big(e as u64), &modulus).unwrap(),
                        &full % &modulus,
                        "b={b} e={e} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&big(18), &big(3)).unwrap(), 2);
        assert_eq!(valuation(&big(2058), &big(7)).unwrap(), 3);
        assert_eq!(valuation(&big(14), &big(4)).unwrap(), 0);
        assert_eq!(valuation(&big(1), &big(2)).unwrap(), 0);
        assert_eq!(valuation(&pow_exact(&big(5), 31), &big(5)).unwrap(), 31);
    }

    #[test]
    fn valuation_rejects_bad_inputs() {
        assert!(matches!(valuation(&big(0), &big(3)), Err(Error::ZeroValuation)));
        assert!(matches!(
            valuation(&big(6), &big(1)),
            Err(Error::ValuationBaseTooSmall(_))
        ));
        assert!(matches!(
            valuation(&big(6), &big(0)),
            Err(Error::ValuationBaseTooSmall(_))
        ));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&big(12), &big(18)).unwrap(), big(6));
        assert_eq!(gcd(&big(7), &big(5)).unwrap(), big(1));
        assert_eq!(gcd(&big(0), &big(9)).unwrap(), big(9));
        assert_eq!(gcd(&big(9), &big(0)).unwrap(), big(9));
        assert!(matches!(gcd(&big(0), &big(0)), Err(Error::GcdOfZeros)));
        assert_eq!(gcd_u64(12, 18).unwrap(), 6);
        assert!(matches!(gcd_u64(0, 0), Err(Error::GcdOfZeros)));
    }

    /// Trial division by 2, 3, then 6k±1 — an independent primality route.
    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n % 2 == 0 {
            return n == 2;
        }
        if n % 3 == 0 {
            return n == 3;
        }
        let mut d = 5u64;
        while d * d <= n {
            if n % d == 0 || n % (d + 2) == 0 {
                return false;
            }
            d += 6;
        }
        true
    }

    #[test]
    fn primality_agrees_with_trial_division_up_to_a_million() {
        for n in 0u64..=1_000_000 {
            assert_eq!(is_prime_u64(n), is_prime_trial(n), "n={n}");
        }
    }

    #[test]
    fn primality_known_values() {
        assert!(is_prime_u64(1093));
        assert!(is_prime_u64(3511));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(0));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(341)); // Fermat pseudoprime base 2
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(u64::MAX)); // divisible by 3
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn primality_biguint_agrees_with_word_route() {
        for n in [0u64, 1, 2, 3, 4, 97, 1093, 3511, 561, 1_000_003, 1_000_005] {
            assert_eq!(is_prime(&big(n)), is_prime_u64(n), "n={n}");
        }
        // Beyond u64: 2^89 - 1 is a Mersenne prime; 2^67 - 1 is composite.
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        assert!(is_prime(&m89));
        let m67 = (BigUint::one() << 67u32) - BigUint::one();
        assert!(!is_prime(&m67));
    }

    #[test]
    fn sieve_matches_millerrabin() {
        let sieved = primes_up_to(10_000);
        let direct: Vec<u64> = (0..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieved, direct);
        assert_eq!(sieved.len(), 1229);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    proptest! {
        #[test]
        fn valuation_splits_exactly(x in 1u64..=1_000_000, base in 2u64..=50) {
            let k = valuation(&big(x), &big(base)).unwrap();
            let bk = pow_exact(&big(base), k);
            prop_assert!((&big(x) % &bk).is_zero());
            let bk1 = pow_exact(&big(base), k + 1);
            prop_assert!(!(&big(x) % &bk1).is_zero());
        }

        #[test]
        fn pow_mod_agrees_on_random_inputs(
            b in 0u64..=1_000_000,
            e in 0u32..=40,
            m in 2u64..=1_000_000,
        ) {
            let full = pow_exact(&big(b), e);
            prop_assert_eq!(
                pow_mod(&big(b), &big(e as u64), &big(m)).unwrap(),
                &full % &big(m)
            );
        }

        #[test]
        fn binom_symmetry(n in 0u32..=60, v in 0u32..=60) {
            prop_assume!(v <= n);
            prop_assert_eq!(binom(n, v).unwrap(), binom(n, n - v).unwrap());
        }
    }
}
