//! Mass range-scan harness: enumerate instances over rectangular ranges,
//! classify and measure each one, collect per-record results plus a
//! summary, and persist everything deterministically.
//!
//! Work is split into slices — one exponent and one chunk of the `a` range —
//! processed either sequentially or on a rayon pool (`parallel` feature,
//! on by default). Slice outputs are reassembled in deterministic slice
//! order, so worker count never changes the output bytes.

pub mod checkpoint;
pub mod claims;
pub mod frequency;
pub mod io;
pub mod record;

pub use checkpoint::{
    read_checkpoint, scan_pairs_checkpointed, scan_triples_checkpointed, CheckpointReport,
    Progress,
};
pub use frequency::{frequency_report, FrequencySummary};
pub use io::{read_records, read_records_from, write_records, write_records_to, RecordFormat};
pub use record::{CaseTag, ScanRecord};

use num_bigint::BigUint;

use crate::binomial::{self, CaseKind};
use crate::exact;
use crate::trinomial::{self, TrinomialCase};
use crate::{Error, Result};

/// Which exponents a scan covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentSet {
    /// An explicit list (deduplicated and sorted ascending before use).
    List(Vec<u32>),
    /// All primes up to and including the bound.
    PrimesTo(u32),
}

impl ExponentSet {
    /// The concrete ascending exponent list. Errors when empty or when any
    /// exponent is below 2.
    pub fn resolve(&self) -> Result<Vec<u32>> {
        let mut out = match self {
            ExponentSet::List(list) => {
                let mut v = list.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
            ExponentSet::PrimesTo(bound) => exact::primes_up_to(*bound as u64)
                .into_iter()
                .map(|p| p as u32)
                .collect(),
        };
        out.retain(|&n| n != 0);
        if out.is_empty() {
            return Err(Error::BadScanConfig("no exponents to scan".into()));
        }
        if let Some(&n) = out.iter().find(|&&n| n < 2) {
            return Err(Error::ExponentTooSmall(n));
        }
        Ok(out)
    }
}

/// Restrict a scan to instances of one case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseFilter {
    Case1,
    Case2,
    Case3,
    TrinomialCase1,
    TrinomialCase2,
}

impl CaseFilter {
    fn matches_pair(&self, kind: CaseKind) -> bool {
        matches!(
            (self, kind),
            (CaseFilter::Case1, CaseKind::Case1 { .. })
                | (CaseFilter::Case2, CaseKind::Case2)
                | (CaseFilter::Case3, CaseKind::Case3)
        )
    }

    fn matches_triple(&self, case: &TrinomialCase) -> bool {
        matches!(
            (self, case),
            (CaseFilter::TrinomialCase1, TrinomialCase::Case1)
                | (CaseFilter::TrinomialCase2, TrinomialCase::Case2)
        )
    }
}

/// Full description of a range scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Inclusive range of the first summand.
    pub a_range: (u64, u64),
    /// Inclusive range of the second summand.
    pub b_range: (u64, u64),
    /// Inclusive range of the third summand; required for triple scans,
    /// ignored by pair scans.
    pub c_range: Option<(u64, u64)>,
    pub exponents: ExponentSet,
    /// Skip tuples sharing a common factor (default). When false, shared
    /// factors are divided out and recorded in `extracted_gcd`.
    pub coprime_only: bool,
    pub case_filter: Option<CaseFilter>,
    /// Cap for the modular valuation route.
    pub valuation_cap: u32,
    /// Worker threads: 0 picks a default, 1 forces the sequential path.
    pub workers: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            a_range: (1, 10),
            b_range: (1, 10),
            c_range: None,
            exponents: ExponentSet::List(Vec::new()),
            coprime_only: true,
            case_filter: None,
            valuation_cap: 64,
            workers: 0,
        }
    }
}

fn check_range(name: &str, (lo, hi): (u64, u64)) -> Result<()> {
    if lo < 1 {
        return Err(Error::BadScanConfig(format!(
            "{name} range must start at 1 or above, got {lo}"
        )));
    }
    if lo > hi {
        return Err(Error::BadScanConfig(format!(
            "{name} range is empty: {lo} > {hi}"
        )));
    }
    Ok(())
}

impl ScanConfig {
    fn validate_common(&self) -> Result<()> {
        check_range("a", self.a_range)?;
        check_range("b", self.b_range)?;
        if self.valuation_cap < 1 {
            return Err(Error::BadScanConfig(
                "valuation cap must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn validate_pairs(&self) -> Result<()> {
        self.validate_common()?;
        if let Some(f) = self.case_filter {
            if matches!(f, CaseFilter::TrinomialCase1 | CaseFilter::TrinomialCase2) {
                return Err(Error::BadScanConfig(
                    "trinomial case filter on a pair scan".into(),
                ));
            }
        }
        Ok(())
    }

    fn validate_triples(&self) -> Result<()> {
        self.validate_common()?;
        let c = self
            .c_range
            .ok_or_else(|| Error::BadScanConfig("triple scan needs a c range".into()))?;
        check_range("c", c)?;
        if let Some(f) = self.case_filter {
            if matches!(f, CaseFilter::Case1 | CaseFilter::Case2 | CaseFilter::Case3) {
                return Err(Error::BadScanConfig(
                    "binomial case filter on a triple scan".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Aggregate counters over one scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub records: u64,
    pub anomalies: u64,
    pub exceptional: u64,
}

impl ScanSummary {
    pub(crate) fn absorb(&mut self, rec: &ScanRecord) {
        self.records += 1;
        if rec.anomaly {
            self.anomalies += 1;
        }
        if rec.exceptional {
            self.exceptional += 1;
        }
    }
}

/// Records plus summary from an in-memory scan.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// Unit of scheduling: one exponent and one inclusive chunk of the
/// `a` range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Slice {
    pub n: u32,
    pub a_lo: u64,
    pub a_hi: u64,
}

/// Split the `a` range of each exponent into around this many chunks.
const TARGET_CHUNKS: u64 = 16;

pub(crate) fn build_slices(cfg: &ScanConfig) -> Result<Vec<Slice>> {
    let exponents = cfg.exponents.resolve()?;
    let (a_lo, a_hi) = cfg.a_range;
    let len = a_hi - a_lo + 1;
    let chunk = (len / TARGET_CHUNKS).max(1);
    let mut slices = Vec::new();
    for n in exponents {
        let mut lo = a_lo;
        while lo <= a_hi {
            let hi = (lo + chunk - 1).min(a_hi);
            slices.push(Slice { n, a_lo: lo, a_hi: hi });
            lo = hi + 1;
        }
    }
    Ok(slices)
}

/// Analyze one pair; `None` when a filter excludes it.
fn pair_record(cfg: &ScanConfig, a: u64, b: u64, n: u32) -> Result<Option<ScanRecord>> {
    let g = exact::gcd_u64(a, b)?;
    if cfg.coprime_only && g != 1 {
        return Ok(None);
    }
    let inst = binomial::normalize(BigUint::from(a), BigUint::from(b), n)?;
    let dec = binomial::decompose(&inst);
    let case = binomial::classify(&dec, n)?;
    if let Some(filter) = cfg.case_filter {
        if !filter.matches_pair(case.kind) {
            return Ok(None);
        }
    }
    let prediction = binomial::predict(&case, n);
    let valuation = binomial::valuation_capped(&inst, cfg.valuation_cap);
    let anomaly = prediction.violated_by(&valuation);
    let exceptional = case.kind == CaseKind::Case3 && valuation.lower_bound() >= 2;
    Ok(Some(ScanRecord {
        a: BigUint::from(a),
        b: BigUint::from(b),
        c: None,
        n,
        case: case.kind.into(),
        valuation,
        predicted_bound: prediction.bound,
        basis: prediction.basis,
        anomaly,
        exceptional,
        extracted_gcd: inst.extracted_gcd().clone(),
    }))
}

/// Analyze one triple; `None` when a filter excludes it.
fn triple_record(cfg: &ScanConfig, a: u64, b: u64, c: u64, n: u32) -> Result<Option<ScanRecord>> {
    let g = exact::gcd_u64(exact::gcd_u64(a, b)?, c)?;
    if cfg.coprime_only && g != 1 {
        return Ok(None);
    }
    let inst = trinomial::normalize3(
        BigUint::from(a),
        BigUint::from(b),
        BigUint::from(c),
        n,
    )?;
    let case = trinomial::classify3(&inst);
    if let Some(filter) = cfg.case_filter {
        if !filter.matches_triple(&case) {
            return Ok(None);
        }
    }
    let prediction = trinomial::predict3(&case, n);
    let valuation = trinomial::valuation_capped3(&inst, cfg.valuation_cap);
    let anomaly = prediction.violated_by(&valuation);
    Ok(Some(ScanRecord {
        a: BigUint::from(a),
        b: BigUint::from(b),
        c: Some(BigUint::from(c)),
        n,
        case: (&case).into(),
        valuation,
        predicted_bound: prediction.bound,
        basis: prediction.basis,
        anomaly,
        exceptional: false,
        extracted_gcd: inst.extracted_gcd().clone(),
    }))
}

pub(crate) fn process_pair_slice(cfg: &ScanConfig, slice: &Slice) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for a in slice.a_lo..=slice.a_hi {
        for b in cfg.b_range.0..=cfg.b_range.1 {
            if let Some(rec) = pair_record(cfg, a, b, slice.n)? {
                out.push(rec);
            }
        }
    }
    Ok(out)
}

pub(crate) fn process_triple_slice(cfg: &ScanConfig, slice: &Slice) -> Result<Vec<ScanRecord>> {
    let c_range = cfg
        .c_range
        .expect("triple scans are validated to carry a c range");
    let mut out = Vec::new();
    for a in slice.a_lo..=slice.a_hi {
        for b in cfg.b_range.0..=cfg.b_range.1 {
            for c in c_range.0..=c_range.1 {
                if let Some(rec) = triple_record(cfg, a, b, c, slice.n)? {
                    out.push(rec);
                }
            }
        }
    }
    Ok(out)
}

/// Run every slice, sequentially or on a worker pool, preserving slice
/// order in the output.
pub(crate) fn run_slices<F>(
    cfg: &ScanConfig,
    slices: &[Slice],
    process: F,
) -> Result<Vec<Vec<ScanRecord>>>
where
    F: Fn(&ScanConfig, &Slice) -> Result<Vec<ScanRecord>> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if cfg.workers != 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::BadScanConfig(format!("worker pool: {e}")))?;
            return pool.install(|| {
                slices
                    .par_iter()
                    .map(|s| process(cfg, s))
                    .collect::<Result<Vec<_>>>()
            });
        }
    }
    slices.iter().map(|s| process(cfg, s)).collect()
}

fn assemble(outputs: Vec<Vec<ScanRecord>>) -> ScanOutcome {
    let mut summary = ScanSummary::default();
    let mut records = Vec::new();
    for chunk in outputs {
        for rec in &chunk {
            summary.absorb(rec);
        }
        records.extend(chunk);
    }
    ScanOutcome { records, summary }
}

/// Scan every `(a, b)` pair in the configured ranges under every exponent.
///
/// Records come out ordered by exponent, then `a`, then `b`, regardless of
/// worker count.
pub fn scan_pairs(cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate_pairs()?;
    let slices = build_slices(cfg)?;
    let outputs = run_slices(cfg, &slices, process_pair_slice)?;
    Ok(assemble(outputs))
}

/// Scan every `(a, b, c)` triple in the configured ranges under every
/// exponent. Record order: exponent, `a`, `b`, `c`.
pub fn scan_triples(cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate_triples()?;
    let slices = build_slices(cfg)?;
    let outputs = run_slices(cfg, &slices, process_triple_slice)?;
    Ok(assemble(outputs))
}
