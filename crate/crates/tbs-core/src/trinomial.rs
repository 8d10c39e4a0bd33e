//! Trinomial extension: `U(a, b, c) = (a + b + c)^n - a^n - b^n - c^n`,
//! analyzed through the exact split
//! `U(a, b, c) = U(a, b) + U(a + b, c)`.
//!
//! The split reduces every trinomial question to two binomial summands:
//! the *pair* `(a, b)` and the *tail* `(a + b, c)`. The two covered residue
//! patterns are the ones where the split yields a clean bound; everything
//! else is reported as uncovered, with the summand cases attached as
//! diagnostics.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::binomial::{
    series_power_form, Basis, CaseKind, Exactness, Prediction, Side, Valuation,
};
use crate::exact;
use crate::{Error, Result};

/// A validated, gcd-reduced input triple together with its exponent.
///
/// Invariants: `a, b, c >= 1`, `gcd(a, b, c) = 1`, `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrinomialInstance {
    a: BigUint,
    b: BigUint,
    c: BigUint,
    n: u32,
    extracted_gcd: BigUint,
}

impl TrinomialInstance {
    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The common factor divided out of the raw input triple (1 if none).
    pub fn extracted_gcd(&self) -> &BigUint {
        &self.extracted_gcd
    }
}

/// Validate `(a, b, c, n)` and reduce the triple by its common gcd.
pub fn normalize3(a: BigUint, b: BigUint, c: BigUint, n: u32) -> Result<TrinomialInstance> {
    if n < 2 {
        return Err(Error::ExponentTooSmall(n));
    }
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::ZeroSummand);
    }
    let g = exact::gcd(&exact::gcd(&a, &b)?, &c)?;
    let (a, b, c) = if g.is_one() {
        (a, b, c)
    } else {
        (&a / &g, &b / &g, &c / &g)
    };
    Ok(TrinomialInstance {
        a,
        b,
        c,
        n,
        extracted_gcd: g,
    })
}

/// The residue patterns the trinomial analysis covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrinomialCase {
    /// `a`, `b`, and `a + b` all carry nonzero remainders; `n | c`.
    Case1,
    /// `n | a + b` and `n | c`, with both of `a`, `b` nondivisible.
    Case2,
    /// Any other pattern. The diagnostics give the residue case of each
    /// binomial summand under the split — pair `(a, b)` and tail
    /// `(a + b, c)` — with `None` for a degenerate summand whose arguments
    /// are both divisible by `n`.
    Uncovered {
        pair: Option<CaseKind>,
        tail: Option<CaseKind>,
    },
}

/// Residue case of an argument pair given its two remainders, or `None`
/// when both vanish (no residue case applies).
fn pair_kind(r1: u32, r2: u32, n: u32) -> Option<CaseKind> {
    match (r1 == 0, r2 == 0) {
        (true, true) => None,
        (true, false) => Some(CaseKind::Case1 { divisible: Side::A }),
        (false, true) => Some(CaseKind::Case1 { divisible: Side::B }),
        (false, false) => Some(if r1 + r2 == n {
            CaseKind::Case2
        } else {
            CaseKind::Case3
        }),
    }
}

fn rem_of(x: &BigUint, n: u32) -> u32 {
    (x % BigUint::from(n))
        .to_u32()
        .expect("remainder below a u32 exponent")
}

/// Classify a triple by the remainders of `a`, `b`, `a + b`, and `c`.
pub fn classify3(inst: &TrinomialInstance) -> TrinomialCase {
    let n = inst.n;
    let rem_a = rem_of(&inst.a, n);
    let rem_b = rem_of(&inst.b, n);
    let rem_ab = rem_of(&(&inst.a + &inst.b), n);
    let rem_c = rem_of(&inst.c, n);
    if rem_a != 0 && rem_b != 0 && rem_ab != 0 && rem_c == 0 {
        TrinomialCase::Case1
    } else if rem_a != 0 && rem_b != 0 && rem_ab == 0 && rem_c == 0 {
        TrinomialCase::Case2
    } else {
        TrinomialCase::Uncovered {
            pair: pair_kind(rem_a, rem_b, n),
            tail: pair_kind(rem_ab, rem_c, n),
        }
    }
}

/// The materialized trinomial series and its two split summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrinomialSeries {
    /// `U(a, b)`.
    pub pair_part: BigUint,
    /// `U(a + b, c)`.
    pub tail_part: BigUint,
    /// `U(a, b, c) = pair_part + tail_part`.
    pub value: BigUint,
}

/// Materialize the series by the direct route and the split route and
/// insist they agree.
pub fn compute_series3(inst: &TrinomialInstance) -> Result<TrinomialSeries> {
    let n = inst.n;
    let total = &inst.a + &inst.b + &inst.c;
    let direct = exact::pow_exact(&total, n)
        - exact::pow_exact(&inst.a, n)
        - exact::pow_exact(&inst.b, n)
        - exact::pow_exact(&inst.c, n);
    let pair_part = series_power_form(&inst.a, &inst.b, n);
    let tail_part = series_power_form(&(&inst.a + &inst.b), &inst.c, n);
    let split = &pair_part + &tail_part;
    if direct != split {
        return Err(Error::Inconsistency(format!(
            "trinomial split disagrees with the direct form for a={} b={} c={} n={n}: \
             direct {direct}, split {split}",
            inst.a, inst.b, inst.c
        )));
    }
    Ok(TrinomialSeries {
        pair_part,
        tail_part,
        value: direct,
    })
}

/// Capped modular valuation of `U(a, b, c)` with respect to `n`; same
/// contract as the binomial version. Requires `cap >= 1`.
pub fn valuation_capped3(inst: &TrinomialInstance, cap: u32) -> Valuation {
    assert!(cap >= 1, "valuation cap must be at least 1");
    let n_big = BigUint::from(inst.n);
    let modulus = exact::pow_exact(&n_big, cap + 1);
    let exp = BigUint::from(inst.n);
    let total_pow = (&inst.a + &inst.b + &inst.c).modpow(&exp, &modulus);
    let mut power_sum = inst.a.modpow(&exp, &modulus);
    power_sum += inst.b.modpow(&exp, &modulus);
    power_sum += inst.c.modpow(&exp, &modulus);
    power_sum %= &modulus;
    let residue = (total_pow + BigUint::from(3u32) * &modulus - power_sum) % &modulus;
    if residue.is_zero() {
        Valuation::AtLeast(cap + 1)
    } else {
        let v = exact::valuation(&residue, &n_big).expect("residue is nonzero, base is >= 2");
        Valuation::Exact(v)
    }
}

/// The divisibility bound promised for a trinomial case at exponent `n`.
///
/// - Case 1, prime `n`: divisible by `n` (lower bound). The prime
///   hypothesis is essential; composite exponents get no guarantee.
/// - Case 2 behaves like the binomial complementary case, because the tail
///   summand `U(a + b, c)` is divisible by a high power of `n` and the pair
///   summand dominates: odd `n` gives at least `n^2`, even `n >= 4` gives
///   valuation exactly 0, and `n = 2` gives exactly 1.
/// - Uncovered patterns promise nothing.
pub fn predict3(case: &TrinomialCase, n: u32) -> Prediction {
    match case {
        TrinomialCase::Case1 => {
            if exact::is_prime_u64(n as u64) {
                Prediction {
                    bound: 1,
                    exactness: Exactness::LowerBound,
                    basis: Basis::TrinomialPrime,
                }
            } else {
                Prediction {
                    bound: 0,
                    exactness: Exactness::NoGuarantee,
                    basis: Basis::Unspecified,
                }
            }
        }
        TrinomialCase::Case2 => {
            if n == 2 {
                Prediction {
                    bound: 1,
                    exactness: Exactness::Exact,
                    basis: Basis::ExponentTwo,
                }
            } else if n % 2 == 0 {
                Prediction {
                    bound: 0,
                    exactness: Exactness::Exact,
                    basis: Basis::TrinomialEvenComplementary,
                }
            } else {
                Prediction {
                    bound: 2,
                    exactness: Exactness::LowerBound,
                    basis: Basis::TrinomialOddComplementary,
                }
            }
        }
        TrinomialCase::Uncovered { .. } => Prediction {
            bound: 0,
            exactness: Exactness::NoGuarantee,
            basis: Basis::Unspecified,
        },
    }
}

/// End-to-end analysis of one trinomial instance.
#[derive(Clone, Debug)]
pub struct TrinomialReport {
    pub instance: TrinomialInstance,
    pub case: TrinomialCase,
    /// Materialized series, when small enough to build exactly.
    pub series: Option<TrinomialSeries>,
    pub actual: Valuation,
    pub prediction: Prediction,
    pub anomaly: bool,
}

/// Ceiling on the estimated bit length of `(a + b + c)^n` up to which
/// [`verify3`] materializes the series for the exact cross-check.
const MATERIALIZE_BIT_LIMIT: u64 = 1 << 20;

/// Normalize, classify, predict, and measure one trinomial instance.
/// Mirrors the binomial pipeline, including the capped-vs-exact
/// cross-check whenever the series is materialized.
pub fn verify3(a: BigUint, b: BigUint, c: BigUint, n: u32, cap: u32) -> Result<TrinomialReport> {
    let inst = normalize3(a, b, c, n)?;
    let case = classify3(&inst);
    let prediction = predict3(&case, n);
    let capped = valuation_capped3(&inst, cap);

    let total = &inst.a + &inst.b + &inst.c;
    let estimated_bits = total.bits().saturating_mul(n as u64);
    let mut series = None;
    let mut actual = capped;
    if estimated_bits <= MATERIALIZE_BIT_LIMIT {
        let sv = compute_series3(&inst)?;
        let exact_v = exact::valuation(&sv.value, &BigUint::from(n))?;
        let consistent = match capped {
            Valuation::Exact(v) => v == exact_v,
            Valuation::AtLeast(k) => exact_v >= k,
        };
        if !consistent {
            return Err(Error::Inconsistency(format!(
                "capped valuation {capped} disagrees with exact valuation {exact_v} \
                 for a={} b={} c={} n={n}",
                inst.a, inst.b, inst.c
            )));
        }
        actual = Valuation::Exact(exact_v);
        series = Some(sv);
    }

    let anomaly = prediction.violated_by(&actual);
    Ok(TrinomialReport {
        instance: inst,
        case,
        series,
        actual,
        prediction,
        anomaly,
    })
}
