//! The built-in verification suite behind the CLI's `verify-claims`: ten
//! sweeps and spot checks covering the analysis pipeline end to end.
//!
//! Every sweep re-derives the expected facts through exact arithmetic
//! (materialized series, divide-loop valuations) instead of trusting the
//! capped modular route it is checking, so a claim passing means two
//! independent computation paths agreed over the whole range.

use std::time::Instant;

use num_bigint::BigUint;

use super::{
    frequency_report, scan_pairs, scan_triples, write_records_to, CaseFilter, ExponentSet,
    RecordFormat, ScanConfig, ScanOutcome, ScanRecord,
};
use crate::binomial::{self, series_power_form, Valuation};
use crate::exact;
use crate::fermat;
use crate::trinomial;
use crate::Result;

/// Outcome of one verification claim.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn run_claim(
    id: &'static str,
    title: &'static str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> ClaimResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("error: {e}")),
    };
    ClaimResult {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Exact valuation of the reduced pair behind a record, via materialized
/// series and divide-loop — the oracle route.
fn oracle_pair_valuation(rec: &ScanRecord) -> u32 {
    let a = &rec.a / &rec.extracted_gcd;
    let b = &rec.b / &rec.extracted_gcd;
    let u = series_power_form(&a, &b, rec.n);
    exact::valuation(&u, &BigUint::from(rec.n)).expect("scan series values are positive")
}

/// Exact valuation of the reduced triple behind a record.
fn oracle_triple_valuation(rec: &ScanRecord) -> u32 {
    let a = &rec.a / &rec.extracted_gcd;
    let b = &rec.b / &rec.extracted_gcd;
    let c = rec.c.as_ref().expect("triple record") / &rec.extracted_gcd;
    let u = series_power_form(&a, &b, rec.n) + series_power_form(&(&a + &b), &c, rec.n);
    exact::valuation(&u, &BigUint::from(rec.n)).expect("scan series values are positive")
}

/// Count records whose persisted valuation disagrees with the oracle.
fn oracle_mismatches(records: &[ScanRecord], triple: bool) -> u64 {
    records
        .iter()
        .filter(|rec| {
            let exact_v = if triple {
                oracle_triple_valuation(rec)
            } else {
                oracle_pair_valuation(rec)
            };
            match rec.valuation {
                Valuation::Exact(v) => v != exact_v,
                Valuation::AtLeast(k) => exact_v < k,
            }
        })
        .count() as u64
}

fn sweep_config(workers: usize) -> ScanConfig {
    ScanConfig {
        a_range: (1, 150),
        b_range: (1, 150),
        exponents: ExponentSet::List((2..=24).collect()),
        workers,
        ..ScanConfig::default()
    }
}

fn claim_case1(workers: usize) -> ClaimResult {
    run_claim("c01", "case-1 pairs are divisible by n^2", move || {
        let cfg = ScanConfig {
            case_filter: Some(CaseFilter::Case1),
            ..sweep_config(workers)
        };
        let out = scan_pairs(&cfg)?;
        let below = out
            .records
            .iter()
            .filter(|r| !(r.valuation.is_exact() && r.valuation.lower_bound() >= 2))
            .count();
        let mism = oracle_mismatches(&out.records, false);
        let passed =
            out.summary.anomalies == 0 && below == 0 && mism == 0 && out.summary.records > 0;
        Ok((
            passed,
            format!(
                "{} records, {} anomalies, {} below bound, {} oracle mismatches",
                out.summary.records, out.summary.anomalies, below, mism
            ),
        ))
    })
}

fn claim_case2_odd(workers: usize) -> ClaimResult {
    run_claim("c02", "case-2 pairs at odd n are divisible by n^2", move || {
        let cfg = ScanConfig {
            exponents: ExponentSet::List((3..=23).step_by(2).collect()),
            case_filter: Some(CaseFilter::Case2),
            ..sweep_config(workers)
        };
        let out = scan_pairs(&cfg)?;
        let below = out
            .records
            .iter()
            .filter(|r| !(r.valuation.is_exact() && r.valuation.lower_bound() >= 2))
            .count();
        let mism = oracle_mismatches(&out.records, false);
        let passed =
            out.summary.anomalies == 0 && below == 0 && mism == 0 && out.summary.records > 0;
        Ok((
            passed,
            format!(
                "{} records, {} anomalies, {} below bound, {} oracle mismatches",
                out.summary.records, out.summary.anomalies, below, mism
            ),
        ))
    })
}

fn claim_case2_even(workers: usize) -> ClaimResult {
    run_claim(
        "c03",
        "case-2 pairs at even n have valuation exactly 0 (exactly 1 at n = 2)",
        move || {
            let cfg = ScanConfig {
                exponents: ExponentSet::List((2..=24).step_by(2).collect()),
                case_filter: Some(CaseFilter::Case2),
                ..sweep_config(workers)
            };
            let out = scan_pairs(&cfg)?;
            let wrong = out
                .records
                .iter()
                .filter(|r| {
                    let expect = if r.n == 2 { 1 } else { 0 };
                    !r.valuation.known_equal(expect)
                })
                .count();
            let mism = oracle_mismatches(&out.records, false);
            let passed =
                out.summary.anomalies == 0 && wrong == 0 && mism == 0 && out.summary.records > 0;
            Ok((
                passed,
                format!(
                    "{} records, {} anomalies, {} off the exact value, {} oracle mismatches",
                    out.summary.records, out.summary.anomalies, wrong, mism
                ),
            ))
        },
    )
}

fn claim_prime_unfolding() -> ClaimResult {
    run_claim(
        "c04",
        "U = p * M holds and p | U for every pair at every prime p <= 97",
        || {
            let mut pairs = 0u64;
            let mut failures = 0u64;
            for p in exact::primes_up_to(97) {
                let p = p as u32;
                let p_big = BigUint::from(p);
                for a in 1u64..=60 {
                    for b in 1u64..=60 {
                        pairs += 1;
                        let (a_big, b_big) = (BigUint::from(a), BigUint::from(b));
                        // combination() itself cross-checks U = p * M.
                        let ok = match fermat::combination(&a_big, &b_big, p) {
                            Ok(_) => {
                                let u = series_power_form(&a_big, &b_big, p);
                                exact::valuation(&u, &p_big).expect("U > 0") >= 1
                            }
                            Err(_) => false,
                        };
                        if !ok {
                            failures += 1;
                        }
                    }
                }
            }
            Ok((
                failures == 0 && pairs == 25 * 3600,
                format!("{pairs} pairs checked, {failures} failures"),
            ))
        },
    )
}

fn claim_composite_witnesses(workers: usize) -> ClaimResult {
    run_claim(
        "c05",
        "every composite n in 4..=24 has a case-3 pair with valuation 0",
        move || {
            let composites: Vec<u32> = (4..=24)
                .filter(|&n| !exact::is_prime_u64(n as u64))
                .collect();
            let mut missing = Vec::new();
            for &n in &composites {
                let cfg = ScanConfig {
                    a_range: (1, 50),
                    b_range: (1, 50),
                    exponents: ExponentSet::List(vec![n]),
                    case_filter: Some(CaseFilter::Case3),
                    workers,
                    ..ScanConfig::default()
                };
                let out = scan_pairs(&cfg)?;
                if !out.records.iter().any(|r| r.valuation.known_equal(0)) {
                    missing.push(n);
                }
            }
            Ok((
                missing.is_empty(),
                if missing.is_empty() {
                    format!(
                        "witnesses found for all {} composite exponents",
                        composites.len()
                    )
                } else {
                    format!("no valuation-0 witness for n in {missing:?}")
                },
            ))
        },
    )
}

fn claim_spot_checks() -> ClaimResult {
    run_claim(
        "c06",
        "exceptional spot check (1, 2, 7) and exceptional-free census at p = 5",
        || {
            let report = binomial::verify(BigUint::from(1u32), BigUint::from(2u32), 7, 64)?;
            let spot_ok = report.actual == Valuation::Exact(3) && report.exceptional();
            let f = frequency_report(5, 50)?;
            let census_ok = f.case3_pairs == 765 && f.exceptional == 0 && f.ratio == (0, 1);
            Ok((
                spot_ok && census_ok,
                format!(
                    "U(1,2) at 7: valuation {}, exceptional {}; p=5 census: {} case-3, {} exceptional",
                    report.actual,
                    report.exceptional(),
                    f.case3_pairs,
                    f.exceptional
                ),
            ))
        },
    )
}

fn claim_trinomial(workers: usize) -> ClaimResult {
    run_claim(
        "c07",
        "trinomial split identity and case bounds",
        move || {
            // Split identity over the full small grid.
            let mut split_mismatches = 0u64;
            for n in 2u32..=12 {
                for a in 1u64..=25 {
                    for b in 1u64..=25 {
                        for c in 1u64..=25 {
                            let direct = exact::pow_exact(&BigUint::from(a + b + c), n)
                                - exact::pow_exact(&BigUint::from(a), n)
                                - exact::pow_exact(&BigUint::from(b), n)
                                - exact::pow_exact(&BigUint::from(c), n);
                            let split = series_power_form(&BigUint::from(a), &BigUint::from(b), n)
                                + series_power_form(&BigUint::from(a + b), &BigUint::from(c), n);
                            if direct != split {
                                split_mismatches += 1;
                            }
                        }
                    }
                }
            }

            let triples_cfg = |exps: Vec<u32>, filter| ScanConfig {
                a_range: (1, 60),
                b_range: (1, 60),
                c_range: Some((1, 60)),
                exponents: ExponentSet::List(exps),
                case_filter: Some(filter),
                workers,
                ..ScanConfig::default()
            };

            let check = |out: &ScanOutcome, ok: &dyn Fn(&ScanRecord) -> bool| -> (u64, u64) {
                let wrong = out.records.iter().filter(|r| !ok(r)).count() as u64;
                (wrong, oracle_mismatches(&out.records, true))
            };

            let t1 = scan_triples(&triples_cfg(
                vec![2, 3, 5, 7, 11, 13],
                CaseFilter::TrinomialCase1,
            ))?;
            let (t1_wrong, t1_mism) = check(&t1, &|r| {
                r.valuation.is_exact() && r.valuation.lower_bound() >= 1
            });

            let t2_odd = scan_triples(&triples_cfg(
                vec![3, 5, 7, 9, 11, 13],
                CaseFilter::TrinomialCase2,
            ))?;
            let (t2o_wrong, t2o_mism) = check(&t2_odd, &|r| {
                r.valuation.is_exact() && r.valuation.lower_bound() >= 2
            });

            let t2_even = scan_triples(&triples_cfg(
                vec![4, 6, 8, 10, 12],
                CaseFilter::TrinomialCase2,
            ))?;
            let (t2e_wrong, t2e_mism) = check(&t2_even, &|r| r.valuation.known_equal(0));

            let w1 = trinomial::verify3(
                BigUint::from(1u32),
                BigUint::from(1u32),
                BigUint::from(3u32),
                3,
                64,
            )?;
            let w2 = trinomial::verify3(
                BigUint::from(1u32),
                BigUint::from(2u32),
                BigUint::from(3u32),
                3,
                64,
            )?;
            let w3 = trinomial::verify3(
                BigUint::from(1u32),
                BigUint::from(1u32),
                BigUint::from(2u32),
                2,
                64,
            )?;
            let spots_ok = w1.actual == Valuation::Exact(1)
                && w2.actual == Valuation::Exact(2)
                && w3.actual == Valuation::Exact(1);

            let anomalies =
                t1.summary.anomalies + t2_odd.summary.anomalies + t2_even.summary.anomalies;
            let records = t1.summary.records + t2_odd.summary.records + t2_even.summary.records;
            let wrong = t1_wrong + t2o_wrong + t2e_wrong;
            let mism = t1_mism + t2o_mism + t2e_mism;
            let passed = split_mismatches == 0
                && anomalies == 0
                && wrong == 0
                && mism == 0
                && spots_ok
                && records > 0;
            Ok((
                passed,
                format!(
                    "split identity clean over 25^3 x 11 grid ({split_mismatches} mismatches); \
                     {records} case records, {anomalies} anomalies, {wrong} off bound, \
                     {mism} oracle mismatches; spot witnesses ok: {spots_ok}"
                ),
            ))
        },
    )
}

fn claim_wieferich() -> ClaimResult {
    run_claim("c08", "quotient-degenerate prime scans match the known hits", || {
        let base2: Vec<(u64, u32)> = fermat::wieferich_scan(2, 4000, 2)
            .iter()
            .map(|h| (h.prime, h.max_power))
            .collect();
        let base3: Vec<(u64, u32)> = fermat::wieferich_scan(3, 100, 2)
            .iter()
            .map(|h| (h.prime, h.max_power))
            .collect();
        let ok2 = base2 == vec![(1093, 2), (3511, 2)];
        let ok3 = base3 == vec![(11, 2)];
        Ok((
            ok2 && ok3,
            format!("base 2 to 4000: {base2:?}; base 3 to 100: {base3:?}"),
        ))
    })
}

fn claim_determinism() -> ClaimResult {
    run_claim(
        "c09",
        "scan output bytes are identical for 1 and 8 workers",
        || {
            let cfg1 = ScanConfig {
                case_filter: Some(CaseFilter::Case1),
                ..sweep_config(1)
            };
            let cfg8 = ScanConfig {
                case_filter: Some(CaseFilter::Case1),
                ..sweep_config(8)
            };
            let out1 = scan_pairs(&cfg1)?;
            let out8 = scan_pairs(&cfg8)?;
            let mut bytes1 = Vec::new();
            let mut bytes8 = Vec::new();
            write_records_to(&out1.records, RecordFormat::Jsonl, &mut bytes1)?;
            write_records_to(&out8.records, RecordFormat::Jsonl, &mut bytes8)?;
            let passed = bytes1 == bytes8 && out1.summary == out8.summary && !bytes1.is_empty();
            Ok((
                passed,
                format!(
                    "{} bytes (1 worker) vs {} bytes (8 workers), summaries {}",
                    bytes1.len(),
                    bytes8.len(),
                    if out1.summary == out8.summary {
                        "equal"
                    } else {
                        "DIFFER"
                    }
                ),
            ))
        },
    )
}

fn claim_round_trip(workers: usize) -> ClaimResult {
    run_claim("c10", "JSONL round-trip reproduces records exactly", move || {
        let cfg = ScanConfig {
            a_range: (1, 20),
            b_range: (1, 20),
            exponents: ExponentSet::List(vec![2, 3, 4, 7, 12]),
            workers,
            ..ScanConfig::default()
        };
        let mut records = scan_pairs(&cfg)?.records;
        records.push(ScanRecord {
            a: BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap(),
            b: BigUint::from(7u32),
            c: Some(BigUint::parse_bytes(b"987654321098765432109876543210", 10).unwrap()),
            n: 11,
            case: super::CaseTag::Uncovered,
            valuation: Valuation::AtLeast(65),
            predicted_bound: 0,
            basis: crate::binomial::Basis::Unspecified,
            anomaly: false,
            exceptional: false,
            extracted_gcd: BigUint::from(1u32),
        });
        let mut buf = Vec::new();
        write_records_to(&records, RecordFormat::Jsonl, &mut buf)?;
        let back = super::read_records_from(std::io::Cursor::new(&buf), RecordFormat::Jsonl)?;
        let passed = back == records;
        Ok((
            passed,
            format!(
                "{} records through {} bytes, {}",
                records.len(),
                buf.len(),
                if passed { "identical" } else { "DIFFER" }
            ),
        ))
    })
}

/// Run the whole suite. `workers` feeds the scans (0 = default pool size).
pub fn run_all(workers: usize) -> Vec<ClaimResult> {
    vec![
        claim_case1(workers),
        claim_case2_odd(workers),
        claim_case2_even(workers),
        claim_prime_unfolding(),
        claim_composite_witnesses(workers),
        claim_spot_checks(),
        claim_trinomial(workers),
        claim_wieferich(),
        claim_determinism(),
        claim_round_trip(workers),
    ]
}
