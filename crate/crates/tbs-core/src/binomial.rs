//! Residue-case analysis of the truncated binomial power series
//! `U(a, b) = (a + b)^n - a^n - b^n`.
//!
//! The pipeline is: [`normalize`] an input pair into a coprime instance,
//! [`decompose`] both summands modulo the exponent, [`classify`] the residue
//! pattern into one of three cases, [`predict`] a divisibility bound for that
//! case, measure the actual valuation (capped modular route or exact
//! materialization), and flag any instance whose observed valuation breaks
//! the prediction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::exact;
use crate::{Error, Result};

/// A validated, gcd-reduced input pair together with its exponent.
///
/// Invariants: `a >= 1`, `b >= 1`, `gcd(a, b) = 1`, `n >= 2`. The factor
/// removed during reduction is retained so callers can report it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityInstance {
    a: BigUint,
    b: BigUint,
    n: u32,
    extracted_gcd: BigUint,
}

impl DivisibilityInstance {
    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The common factor divided out of the raw input pair (1 if none).
    pub fn extracted_gcd(&self) -> &BigUint {
        &self.extracted_gcd
    }
}

/// Validate `(a, b, n)` and reduce the pair by its gcd.
///
/// Both summands must be strictly positive and the exponent at least 2.
pub fn normalize(a: BigUint, b: BigUint, n: u32) -> Result<DivisibilityInstance> {
    if n < 2 {
        return Err(Error::ExponentTooSmall(n));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSummand);
    }
    let g = exact::gcd(&a, &b)?;
    let (a, b) = if g.is_one() {
        (a, b)
    } else {
        (&a / &g, &b / &g)
    };
    Ok(DivisibilityInstance {
        a,
        b,
        n,
        extracted_gcd: g,
    })
}

/// Division of both summands by the exponent: `a = quot_a * n + rem_a`,
/// `b = quot_b * n + rem_b`, plus the derived sums and the divisibility of
/// each quotient by `n` (relevant for iterating the analysis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDecomposition {
    pub quot_a: BigUint,
    pub rem_a: u32,
    pub quot_b: BigUint,
    pub rem_b: u32,
    /// `quot_a + quot_b`.
    pub quot_sum: BigUint,
    /// `rem_a + rem_b`, in `0 ..= 2n - 2`.
    pub rem_sum: u32,
    pub quot_a_multiple_of_n: bool,
    pub quot_b_multiple_of_n: bool,
}

/// Decompose both summands of an instance modulo its exponent.
pub fn decompose(inst: &DivisibilityInstance) -> ResidueDecomposition {
    let n = BigUint::from(inst.n);
    let (quot_a, rem_a) = inst.a.div_rem(&n);
    let (quot_b, rem_b) = inst.b.div_rem(&n);
    let rem_a = rem_a.to_u32().expect("remainder below a u32 exponent");
    let rem_b = rem_b.to_u32().expect("remainder below a u32 exponent");
    let quot_a_multiple_of_n = (&quot_a % &n).is_zero();
    let quot_b_multiple_of_n = (&quot_b % &n).is_zero();
    ResidueDecomposition {
        quot_sum: &quot_a + &quot_b,
        rem_sum: rem_a + rem_b,
        quot_a,
        rem_a,
        quot_b,
        rem_b,
        quot_a_multiple_of_n,
        quot_b_multiple_of_n,
    }
}

/// Which summand of a pair is the one divisible by the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// The three residue patterns of a coprime pair modulo the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// Exactly one summand is divisible by `n`.
    Case1 { divisible: Side },
    /// Both remainders are nonzero and sum to `n`.
    Case2,
    /// Both remainders are nonzero and their sum differs from `n`.
    Case3,
}

/// A residue case together with the exponent facts the predictions branch on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseLabel {
    pub kind: CaseKind,
    pub n_is_prime: bool,
    pub n_is_even: bool,
}

/// Classify a decomposition into its residue case.
///
/// Errors when both remainders vanish: then every summand carries a factor
/// of `n` and no residue case applies (coprime instances can never reach
/// this, but raw decompositions can).
pub fn classify(dec: &ResidueDecomposition, n: u32) -> Result<CaseLabel> {
    let kind = match (dec.rem_a == 0, dec.rem_b == 0) {
        (true, true) => return Err(Error::AllSummandsDivisible { n }),
        (true, false) => CaseKind::Case1 { divisible: Side::A },
        (false, true) => CaseKind::Case1 { divisible: Side::B },
        (false, false) => {
            if dec.rem_sum == n {
                CaseKind::Case2
            } else {
                CaseKind::Case3
            }
        }
    };
    Ok(CaseLabel {
        kind,
        n_is_prime: exact::is_prime_u64(n as u64),
        n_is_even: n % 2 == 0,
    })
}

/// The materialized series together with the intermediates worth reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesValue {
    /// `a + b`.
    pub base_sum: BigUint,
    /// `a^n + b^n`.
    pub power_sum: BigUint,
    /// `U(a, b) = (a + b)^n - a^n - b^n`.
    pub value: BigUint,
}

/// Closed power form `(a + b)^n - a^n - b^n`. Requires `n >= 1`, where the
/// subtraction can never underflow.
pub(crate) fn series_power_form(a: &BigUint, b: &BigUint, n: u32) -> BigUint {
    exact::pow_exact(&(a + b), n) - exact::pow_exact(a, n) - exact::pow_exact(b, n)
}

/// Expanded form `sum_{v=1}^{n-1} C(n, v) a^v b^(n-v)`.
pub(crate) fn series_sum_form(a: &BigUint, b: &BigUint, n: u32) -> Result<BigUint> {
    // b_powers[k] = b^(k+1), for k in 0 .. n-1.
    let mut b_powers = Vec::with_capacity(n.saturating_sub(1) as usize);
    let mut p = b.clone();
    for _ in 1..n {
        b_powers.push(p.clone());
        p *= b;
    }
    let mut acc = BigUint::zero();
    let mut a_pow = BigUint::one();
    for v in 1..n {
        a_pow *= a;
        acc += exact::binom(n, v)? * &a_pow * &b_powers[(n - v - 1) as usize];
    }
    Ok(acc)
}

/// Materialize the series by both evaluation routes and insist they agree.
pub fn compute_series(inst: &DivisibilityInstance) -> Result<SeriesValue> {
    let n = inst.n;
    let base_sum = &inst.a + &inst.b;
    let power_sum = exact::pow_exact(&inst.a, n) + exact::pow_exact(&inst.b, n);
    let value = exact::pow_exact(&base_sum, n) - &power_sum;
    let sum_route = series_sum_form(&inst.a, &inst.b, n)?;
    if value != sum_route {
        return Err(Error::Inconsistency(format!(
            "series forms disagree for a={} b={} n={}: power form {value}, sum form {sum_route}",
            inst.a, inst.b, n
        )));
    }
    Ok(SeriesValue {
        base_sum,
        power_sum,
        value,
    })
}

/// An observed valuation: either resolved exactly, or known only to reach
/// the cap (`AtLeast(k)` means the true valuation is `>= k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The largest `k` such that `n^k` is known to divide the value.
    pub fn lower_bound(&self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Valuation::Exact(_))
    }

    /// True when the valuation is known to equal `v` exactly.
    pub fn known_equal(&self, v: u32) -> bool {
        matches!(self, Valuation::Exact(x) if *x == v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(k) => write!(f, "ge:{k}"),
        }
    }
}

impl FromStr for Valuation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("ge:") {
            rest.parse::<u32>()
                .map(Valuation::AtLeast)
                .map_err(|e| format!("bad valuation bound {s:?}: {e}"))
        } else {
            s.parse::<u32>()
                .map(Valuation::Exact)
                .map_err(|e| format!("bad valuation {s:?}: {e}"))
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Capped modular valuation of `U(a, b)` with respect to `n`.
///
/// Works entirely modulo `n^(cap+1)`: if the reduced series is nonzero, its
/// valuation is the exact valuation of the full series (and is `<= cap`);
/// if the residue vanishes the result is the sentinel `AtLeast(cap + 1)`.
/// The series itself is never materialized. Requires `cap >= 1`.
pub fn valuation_capped(inst: &DivisibilityInstance, cap: u32) -> Valuation {
    assert!(cap >= 1, "valuation cap must be at least 1");
    let n_big = BigUint::from(inst.n);
    let modulus = exact::pow_exact(&n_big, cap + 1);
    let exp = BigUint::from(inst.n);
    let q_pow = (&inst.a + &inst.b).modpow(&exp, &modulus);
    let a_pow = inst.a.modpow(&exp, &modulus);
    let b_pow = inst.b.modpow(&exp, &modulus);
    let power_sum = (a_pow + b_pow) % &modulus;
    let residue = (q_pow + &modulus - power_sum) % &modulus;
    if residue.is_zero() {
        Valuation::AtLeast(cap + 1)
    } else {
        let v = exact::valuation(&residue, &n_big).expect("residue is nonzero, base is >= 2");
        Valuation::Exact(v)
    }
}

/// How strongly a prediction pins the valuation down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// The valuation is at least the bound; larger values are fine.
    LowerBound,
    /// The valuation equals the bound; any deviation is an anomaly.
    Exact,
    /// Nothing is promised; no observation is anomalous.
    NoGuarantee,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::LowerBound => "lower-bound",
            Exactness::Exact => "exact",
            Exactness::NoGuarantee => "no-guarantee",
        })
    }
}

/// Which analysis rule produced a prediction. Serialized with the fixed
/// protocol tags used in persisted records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// One summand divisible by the exponent.
    OneSideDivisible,
    /// Complementary remainders, odd exponent.
    OddComplementary,
    /// Complementary remainders, even exponent of at least 4.
    EvenComplementary,
    /// Complementary remainders at exponent 2, where the series is `2ab`.
    ExponentTwo,
    /// Generic residues, prime exponent.
    PrimeGeneric,
    /// Generic residues, composite exponent.
    CompositeGeneric,
    /// Trinomial with the third summand divisible, prime exponent.
    TrinomialPrime,
    /// Trinomial complementary pair plus divisible tail, odd exponent.
    TrinomialOddComplementary,
    /// Trinomial complementary pair plus divisible tail, even exponent >= 4.
    TrinomialEvenComplementary,
    /// No rule applies.
    Unspecified,
}

impl Basis {
    /// The wire tag stored in persisted records.
    pub fn tag(&self) -> &'static str {
        match self {
            Basis::OneSideDivisible => "I.6",
            Basis::OddComplementary => "I.8-odd",
            Basis::EvenComplementary => "I.8-even",
            Basis::ExponentTwo => "n2-exception",
            Basis::PrimeGeneric => "I.10a",
            Basis::CompositeGeneric => "I.10b",
            Basis::TrinomialPrime => "II.3",
            Basis::TrinomialOddComplementary => "II.4a",
            Basis::TrinomialEvenComplementary => "II.4b",
            Basis::Unspecified => "none",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Basis> {
        Some(match tag {
            "I.6" => Basis::OneSideDivisible,
            "I.8-odd" => Basis::OddComplementary,
            "I.8-even" => Basis::EvenComplementary,
            "n2-exception" => Basis::ExponentTwo,
            "I.10a" => Basis::PrimeGeneric,
            "I.10b" => Basis::CompositeGeneric,
            "II.3" => Basis::TrinomialPrime,
            "II.4a" => Basis::TrinomialOddComplementary,
            "II.4b" => Basis::TrinomialEvenComplementary,
            "none" => Basis::Unspecified,
            _ => return None,
        })
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Basis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Basis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Basis::from_tag(&s).ok_or_else(|| de::Error::custom(format!("unknown basis tag {s:?}")))
    }
}

/// A predicted divisibility bound with its strength and provenance tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub bound: u32,
    pub exactness: Exactness,
    pub basis: Basis,
}

impl Prediction {
    /// Does an observed valuation contradict this prediction?
    ///
    /// A capped observation `AtLeast(k)` contradicts a lower bound never
    /// (it is evidence of more divisibility, not less) and contradicts an
    /// exact prediction only when `k` already exceeds the predicted value.
    pub fn violated_by(&self, actual: &Valuation) -> bool {
        match self.exactness {
            Exactness::NoGuarantee => false,
            Exactness::LowerBound => actual.is_exact() && actual.lower_bound() < self.bound,
            Exactness::Exact => match actual {
                Valuation::Exact(v) => *v != self.bound,
                Valuation::AtLeast(k) => *k > self.bound,
            },
        }
    }
}

/// The divisibility bound promised for a residue case at exponent `n`.
///
/// - Case 1: the series is divisible by `n^2` (lower bound, any `n >= 2`).
/// - Case 2, odd `n`: divisible by `n^2` (lower bound).
/// - Case 2, even `n >= 4`: the series is a unit modulo `n` — valuation
///   exactly 0.
/// - Case 2, `n = 2`: the series is `2ab` with `ab` odd — valuation
///   exactly 1 (the one even exponent that escapes the unit argument).
/// - Case 3, prime `n`: divisible by `n` (lower bound).
/// - Case 3, composite `n`: no guarantee.
pub fn predict(case: &CaseLabel, n: u32) -> Prediction {
    match case.kind {
        CaseKind::Case1 { .. } => Prediction {
            bound: 2,
            exactness: Exactness::LowerBound,
            basis: Basis::OneSideDivisible,
        },
        CaseKind::Case2 => {
            if n == 2 {
                Prediction {
                    bound: 1,
                    exactness: Exactness::Exact,
                    basis: Basis::ExponentTwo,
                }
            } else if case.n_is_even {
                Prediction {
                    bound: 0,
                    exactness: Exactness::Exact,
                    basis: Basis::EvenComplementary,
                }
            } else {
                Prediction {
                    bound: 2,
                    exactness: Exactness::LowerBound,
                    basis: Basis::OddComplementary,
                }
            }
        }
        CaseKind::Case3 => {
            if case.n_is_prime {
                Prediction {
                    bound: 1,
                    exactness: Exactness::LowerBound,
                    basis: Basis::PrimeGeneric,
                }
            } else {
                Prediction {
                    bound: 0,
                    exactness: Exactness::NoGuarantee,
                    basis: Basis::CompositeGeneric,
                }
            }
        }
    }
}

/// End-to-end analysis of one instance.
#[derive(Clone, Debug)]
pub struct ValuationReport {
    pub instance: DivisibilityInstance,
    pub case: CaseLabel,
    /// Materialized series, when small enough to build exactly.
    pub series: Option<SeriesValue>,
    pub actual: Valuation,
    pub prediction: Prediction,
    pub anomaly: bool,
}

impl ValuationReport {
    /// An instance is exceptional when it sits in residue case 3 yet the
    /// series picks up a second factor of the exponent.
    pub fn exceptional(&self) -> bool {
        matches!(self.case.kind, CaseKind::Case3) && self.actual.lower_bound() >= 2
    }
}

/// Ceiling on the estimated bit length of `(a + b)^n` up to which [`verify`]
/// materializes the series for the exact divide-loop cross-check.
const MATERIALIZE_BIT_LIMIT: u64 = 1 << 20;

/// Normalize, classify, predict, and measure one instance.
///
/// The valuation is first taken by the capped modular route. Whenever the
/// series is small enough it is also materialized, the capped result is
/// cross-checked against the exact divide-loop (disagreement is an internal
/// error), and the exact value is reported — so a cap exhaustion on a
/// desk-scale instance still ends in an exact answer.
pub fn verify(a: BigUint, b: BigUint, n: u32, cap: u32) -> Result<ValuationReport> {
    let inst = normalize(a, b, n)?;
    let dec = decompose(&inst);
    let case = classify(&dec, n)?;
    let prediction = predict(&case, n);
    let capped = valuation_capped(&inst, cap);

    let estimated_bits = (inst.a() + inst.b()).bits().saturating_mul(n as u64);
    let mut series = None;
    let mut actual = capped;
    if estimated_bits <= MATERIALIZE_BIT_LIMIT {
        let sv = compute_series(&inst)?;
        let exact_v = exact::valuation(&sv.value, &BigUint::from(n))?;
        let consistent = match capped {
            Valuation::Exact(v) => v == exact_v,
            Valuation::AtLeast(k) => exact_v >= k,
        };
        if !consistent {
            return Err(Error::Inconsistency(format!(
                "capped valuation {capped} disagrees with exact valuation {exact_v} \
                 for a={} b={} n={n}",
                inst.a, inst.b
            )));
        }
        actual = Valuation::Exact(exact_v);
        series = Some(sv);
    }

    let anomaly = prediction.violated_by(&actual);
    Ok(ValuationReport {
        instance: inst,
        case,
        series,
        actual,
        prediction,
        anomaly,
    })
}

/// Check the algebraic recombination behind the complementary-remainder
/// bounds: for `1 <= r < n`, the series at the residue pair `(r, n - r)`
/// equals the alternating expansion in powers of `n`,
///
/// `n^n - r^n - (n-r)^n  =  [n even ? -2 r^n : 0]
///                          + sum_{v=1}^{n-1} (-1)^(n-v+1) C(n, v) n^v r^(n-v)`
///
/// in which every sum term carries a factor `n^2` (the `v = 1` term is
/// `± n^2 r^(n-1)`), making the odd-exponent bound and the even-exponent
/// unit argument visible. Returns true iff both routes agree.
pub fn case2_identity_check(rem_a: u32, n: u32) -> bool {
    assert!(n >= 2 && rem_a >= 1 && rem_a < n, "need 1 <= rem_a < n");
    let r = BigUint::from(rem_a);
    let n_big = BigUint::from(n);
    let direct = BigInt::from(exact::pow_exact(&n_big, n))
        - BigInt::from(exact::pow_exact(&r, n))
        - BigInt::from(exact::pow_exact(&BigUint::from(n - rem_a), n));

    let mut recombined = if n % 2 == 0 {
        -BigInt::from(2u32) * BigInt::from(exact::pow_exact(&r, n))
    } else {
        BigInt::zero()
    };
    for v in 1..n {
        let magnitude = BigInt::from(
            exact::binom(n, v).expect("v < n")
                * exact::pow_exact(&n_big, v)
                * exact::pow_exact(&r, n - v),
        );
        if (n - v + 1) % 2 == 0 {
            recombined += magnitude;
        } else {
            recombined -= magnitude;
        }
    }
    direct == recombined
}
