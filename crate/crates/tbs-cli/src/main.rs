//! `tbs` — command-line front end for the truncated-power-sum toolkit.
//!
//! Subcommands: `analyze` (one pair or triple), `scan` / `scan3` (range
//! sweeps with JSONL/CSV output), `quotient` (quotient quantities and the
//! exceptional-pair census), `wieferich` (degenerate-quotient prime
//! search), and `verify-claims` (the bundled verification suite).
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 at least one anomaly
//! (or failed claim), 3 I/O error.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use tbs_core::binomial::{self, CaseKind, CaseLabel, Exactness, Prediction, Side};
use tbs_core::fermat;
use tbs_core::scan::{
    frequency_report, scan_pairs, scan_pairs_checkpointed, scan_triples,
    scan_triples_checkpointed, write_records, write_records_to, CaseFilter, CaseTag,
    CheckpointReport, ExponentSet, RecordFormat, ScanConfig, ScanSummary,
};
use tbs_core::trinomial::{self, TrinomialCase};
use tbs_core::Error;

#[derive(Parser)]
#[command(
    name = "tbs",
    version,
    about = "Exact n-adic valuations of truncated power sums: analysis, range scans, and quotient tools",
    propagate_version = true
)]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one pair (a, b) or triple (a, b, c) under exponent n.
    Analyze {
        /// First summand.
        a: BigUint,
        /// Second summand.
        b: BigUint,
        /// Optional third summand for a trinomial analysis.
        c: Option<BigUint>,
        /// Exponent (n >= 2).
        #[arg(long)]
        n: u32,
        /// Valuation cap K; deeper divisibility reports as "ge:K+1".
        #[arg(long, default_value_t = 64, value_name = "K")]
        cap: u32,
    },
    /// Scan all pairs (a, b) over rectangular ranges.
    Scan(ScanArgs),
    /// Scan all triples (a, b, c) over rectangular ranges.
    Scan3 {
        #[command(flatten)]
        args: ScanArgs,
        /// Third-summand range.
        #[arg(long, value_name = "LO:HI")]
        c_range: String,
    },
    /// Quotient quantities of one or two summands, or the exceptional census.
    Quotient {
        /// First summand.
        x: Option<BigUint>,
        /// Second summand: with both present, the pair criterion runs.
        y: Option<BigUint>,
        /// The prime modulus p.
        #[arg(long, value_name = "P")]
        n: u32,
        /// Census mode: rate of exceptional case-3 pairs up to --limit.
        #[arg(long)]
        frequency: bool,
        /// Inclusive bound of the census square.
        #[arg(long, value_name = "B")]
        limit: Option<u64>,
    },
    /// Scan odd primes p <= limit for base^(p-1) = 1 (mod p^power).
    Wieferich {
        /// Congruence base.
        #[arg(long)]
        base: u64,
        /// Inclusive prime bound.
        #[arg(long)]
        limit: u64,
        /// Required power of p (2 reproduces the classical search).
        #[arg(long, default_value_t = 2, value_name = "R")]
        power: u32,
    },
    /// Run the built-in verification suite and report each claim.
    VerifyClaims {
        /// Worker threads for the sweeps (0 = one per core).
        #[arg(long, default_value_t = 0, value_name = "W")]
        workers: usize,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Single exponent n.
    #[arg(long, value_name = "N", conflicts_with_all = ["n_range", "primes_to"])]
    n: Option<u32>,
    /// Inclusive exponent range.
    #[arg(long, value_name = "LO:HI", conflicts_with = "primes_to")]
    n_range: Option<String>,
    /// All primes up to and including P.
    #[arg(long, value_name = "P")]
    primes_to: Option<u32>,
    /// First-summand range.
    #[arg(long, value_name = "LO:HI", default_value = "1:10")]
    a_range: String,
    /// Second-summand range.
    #[arg(long, value_name = "LO:HI", default_value = "1:10")]
    b_range: String,
    /// Valuation cap K; deeper divisibility reports as "ge:K+1".
    #[arg(long, default_value_t = 64, value_name = "K")]
    cap: u32,
    /// Skip tuples sharing a common factor (the default).
    #[arg(long, overrides_with = "no_coprime")]
    coprime: bool,
    /// Keep non-coprime tuples: reduce them and record the extracted gcd.
    #[arg(long)]
    no_coprime: bool,
    /// Only emit records of one case.
    #[arg(long, value_name = "1|2|3|t1|t2")]
    case: Option<String>,
    /// Record encoding.
    #[arg(long, default_value = "jsonl", value_name = "jsonl|csv")]
    format: String,
    /// Write records to this file; the summary then goes to stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core, 1 = sequential).
    #[arg(long, default_value_t = 0, value_name = "W")]
    workers: usize,
    /// Keep a resumable progress footer in the output while running.
    #[arg(long, requires = "out")]
    checkpoint: bool,
    /// Resume an interrupted checkpointed scan (implies --checkpoint).
    #[arg(long, requires = "out")]
    resume: bool,
}

/// CLI failures, keyed to their exit code class.
enum CliError {
    /// Exit 1: arguments that parse but make no sense together.
    Usage(String),
    /// Mapped by kind: I/O and record-parse errors exit 3, the rest 1.
    Lib(Error),
    /// Writing to stdout failed. A reader that closed the pipe early
    /// (`tbs ... | head`) is normal termination: silent exit 0. Anything
    /// else is a real I/O failure: exit 3.
    Stdout(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Stdout(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(Error::Io { .. } | Error::MalformedRecord { .. }) => 3,
            CliError::Lib(_) => 1,
            CliError::Stdout(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
            CliError::Stdout(_) => 3,
        }
    }

    /// True for failures that should not print anything (closed pipe).
    fn silent(&self) -> bool {
        matches!(self, CliError::Stdout(e) if e.kind() == io::ErrorKind::BrokenPipe)
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(msg) => msg.clone(),
            CliError::Lib(e) => e.to_string(),
            CliError::Stdout(e) => format!("<stdout>: {e}"),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not failures; real parse errors are
            // domain errors (exit 1), not clap's default exit 2, which this
            // tool reserves for anomalies.
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if !e.silent() {
                let _ = writeln!(io::stderr(), "error: {}", e.message());
            }
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Analyze { a, b, c, n, cap } => analyze(a, b, c, n, cap, json),
        Command::Scan(args) => scan(&args, None, json),
        Command::Scan3 { args, c_range } => {
            let c = parse_range(&c_range)?;
            scan(&args, Some(c), json)
        }
        Command::Quotient {
            x,
            y,
            n,
            frequency,
            limit,
        } => quotient(x, y, n, frequency, limit, json),
        Command::Wieferich { base, limit, power } => wieferich(base, limit, power, json),
        Command::VerifyClaims { workers } => verify_claims(workers, json),
    }
}

// ------------------------------------------------------------- analyze

fn describe_case(label: &CaseLabel) -> String {
    match label.kind {
        CaseKind::Case1 { divisible: Side::A } => "1 (a divisible by n)".into(),
        CaseKind::Case1 { divisible: Side::B } => "1 (b divisible by n)".into(),
        CaseKind::Case2 => format!(
            "2 (complementary remainders, {} n)",
            if label.n_is_even { "even" } else { "odd" }
        ),
        CaseKind::Case3 => format!(
            "3 ({} n)",
            if label.n_is_prime { "prime" } else { "composite" }
        ),
    }
}

fn describe_trinomial_case(case: &TrinomialCase) -> String {
    let part = |kind: &Option<CaseKind>| match kind {
        None => "degenerate".to_string(),
        Some(CaseKind::Case1 { .. }) => "case 1".to_string(),
        Some(CaseKind::Case2) => "case 2".to_string(),
        Some(CaseKind::Case3) => "case 3".to_string(),
    };
    match case {
        TrinomialCase::Case1 => "t1 (n divides c only)".into(),
        TrinomialCase::Case2 => "t2 (n divides a + b and c)".into(),
        TrinomialCase::Uncovered { pair, tail } => format!(
            "uncovered (split: pair {}, tail {})",
            part(pair),
            part(tail)
        ),
    }
}

fn describe_prediction(p: &Prediction) -> String {
    match p.exactness {
        Exactness::LowerBound => format!("valuation >= {} (basis {})", p.bound, p.basis.tag()),
        Exactness::Exact => format!("valuation == {} (basis {})", p.bound, p.basis.tag()),
        Exactness::NoGuarantee => "no guarantee".into(),
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(
    a: BigUint,
    b: BigUint,
    c: Option<BigUint>,
    n: u32,
    cap: u32,
    json: bool,
) -> Result<i32, CliError> {
    let mut w = io::stdout().lock();
    match c {
        None => {
            let report = binomial::verify(a, b, n, cap)?;
            let inst = &report.instance;
            if json {
                let payload = json!({
                    "a": inst.a().to_string(),
                    "b": inst.b().to_string(),
                    "n": inst.n(),
                    "extracted_gcd": inst.extracted_gcd().to_string(),
                    "case": CaseTag::from(report.case.kind).as_str(),
                    "u": report.series.as_ref().map(|s| s.value.to_string()),
                    "valuation": report.actual.to_string(),
                    "predicted_bound": report.prediction.bound,
                    "exactness": report.prediction.exactness.to_string(),
                    "basis": report.prediction.basis.tag(),
                    "anomaly": report.anomaly,
                    "exceptional": report.exceptional(),
                });
                writeln!(w, "{payload}")?;
            } else {
                writeln!(w, "a: {}", inst.a())?;
                writeln!(w, "b: {}", inst.b())?;
                writeln!(w, "n: {}", inst.n())?;
                if !inst.extracted_gcd().eq(&BigUint::from(1u32)) {
                    writeln!(w, "extracted gcd: {}", inst.extracted_gcd())?;
                }
                writeln!(w, "case: {}", describe_case(&report.case))?;
                match &report.series {
                    Some(s) => writeln!(w, "U: {}", s.value)?,
                    None => writeln!(w, "U: (too large to materialize)")?,
                }
                writeln!(w, "valuation: {}", report.actual)?;
                writeln!(w, "prediction: {}", describe_prediction(&report.prediction))?;
                writeln!(w, "anomaly: {}", yesno(report.anomaly))?;
                writeln!(w, "exceptional: {}", yesno(report.exceptional()))?;
            }
            Ok(if report.anomaly { 2 } else { 0 })
        }
        Some(c) => {
            let report = trinomial::verify3(a, b, c, n, cap)?;
            let inst = &report.instance;
            if json {
                let payload = json!({
                    "a": inst.a().to_string(),
                    "b": inst.b().to_string(),
                    "c": inst.c().to_string(),
                    "n": inst.n(),
                    "extracted_gcd": inst.extracted_gcd().to_string(),
                    "case": CaseTag::from(&report.case).as_str(),
                    "u": report.series.as_ref().map(|s| s.value.to_string()),
                    "valuation": report.actual.to_string(),
                    "predicted_bound": report.prediction.bound,
                    "exactness": report.prediction.exactness.to_string(),
                    "basis": report.prediction.basis.tag(),
                    "anomaly": report.anomaly,
                    "exceptional": false,
                });
                writeln!(w, "{payload}")?;
            } else {
                writeln!(w, "a: {}", inst.a())?;
                writeln!(w, "b: {}", inst.b())?;
                writeln!(w, "c: {}", inst.c())?;
                writeln!(w, "n: {}", inst.n())?;
                if !inst.extracted_gcd().eq(&BigUint::from(1u32)) {
                    writeln!(w, "extracted gcd: {}", inst.extracted_gcd())?;
                }
                writeln!(w, "case: {}", describe_trinomial_case(&report.case))?;
                match &report.series {
                    Some(s) => writeln!(w, "U: {}", s.value)?,
                    None => writeln!(w, "U: (too large to materialize)")?,
                }
                writeln!(w, "valuation: {}", report.actual)?;
                writeln!(w, "prediction: {}", describe_prediction(&report.prediction))?;
                writeln!(w, "anomaly: {}", yesno(report.anomaly))?;
            }
            Ok(if report.anomaly { 2 } else { 0 })
        }
    }
}

// ---------------------------------------------------------------- scan

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("range {text:?} is not of the form LO:HI")))?;
    let parse = |part: &str| {
        part.trim()
            .parse::<u64>()
            .map_err(|e| CliError::Usage(format!("bad range endpoint {part:?}: {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn parse_case(text: Option<&str>) -> Result<Option<CaseFilter>, CliError> {
    Ok(match text {
        None => None,
        Some("1") => Some(CaseFilter::Case1),
        Some("2") => Some(CaseFilter::Case2),
        Some("3") => Some(CaseFilter::Case3),
        Some("t1") => Some(CaseFilter::TrinomialCase1),
        Some("t2") => Some(CaseFilter::TrinomialCase2),
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown case filter {other:?} (expected 1, 2, 3, t1, or t2)"
            )))
        }
    })
}

fn exponent_set(args: &ScanArgs) -> Result<ExponentSet, CliError> {
    match (args.n, &args.n_range, args.primes_to) {
        (Some(n), None, None) => Ok(ExponentSet::List(vec![n])),
        (None, Some(range), None) => {
            let (lo, hi) = parse_range(range)?;
            if hi > u32::MAX as u64 {
                return Err(CliError::Usage(format!("exponent bound {hi} is too large")));
            }
            Ok(ExponentSet::List((lo as u32..=hi as u32).collect()))
        }
        (None, None, Some(p)) => Ok(ExponentSet::PrimesTo(p)),
        _ => Err(CliError::Usage(
            "exactly one of --n, --n-range, --primes-to is required".into(),
        )),
    }
}

fn print_summary(
    summary: &ScanSummary,
    checkpoint: Option<&CheckpointReport>,
    json: bool,
) -> Result<(), CliError> {
    let mut w = io::stdout().lock();
    if json {
        let mut payload = json!({
            "records": summary.records,
            "anomalies": summary.anomalies,
            "exceptional": summary.exceptional,
        });
        if let Some(report) = checkpoint {
            payload["resumed_from"] = match report.resumed_from {
                Some(p) => json!({"n": p.n, "a": p.a}),
                None => serde_json::Value::Null,
            };
            payload["slices_run"] = json!(report.slices_run);
        }
        writeln!(w, "{payload}")?;
    } else {
        writeln!(w, "records: {}", summary.records)?;
        writeln!(w, "anomalies: {}", summary.anomalies)?;
        writeln!(w, "exceptional: {}", summary.exceptional)?;
        if let Some(report) = checkpoint {
            match report.resumed_from {
                Some(p) => writeln!(w, "resumed from: n={}, a={}", p.n, p.a)?,
                None => writeln!(w, "resumed from: (start)")?,
            }
            writeln!(w, "slices run: {}", report.slices_run)?;
        }
    }
    Ok(())
}

/// Summary of a no-`--out` scan goes to stderr so stdout stays pure records.
/// Best effort: a broken stderr never aborts the run.
fn print_summary_to_stderr(summary: &ScanSummary, json: bool) {
    let mut w = io::stderr().lock();
    let _ = if json {
        writeln!(
            w,
            "{}",
            json!({
                "records": summary.records,
                "anomalies": summary.anomalies,
                "exceptional": summary.exceptional,
            })
        )
    } else {
        writeln!(
            w,
            "records: {}  anomalies: {}  exceptional: {}",
            summary.records, summary.anomalies, summary.exceptional
        )
    };
}

fn scan(args: &ScanArgs, c_range: Option<(u64, u64)>, json: bool) -> Result<i32, CliError> {
    let cfg = ScanConfig {
        a_range: parse_range(&args.a_range)?,
        b_range: parse_range(&args.b_range)?,
        c_range,
        exponents: exponent_set(args)?,
        coprime_only: !args.no_coprime,
        case_filter: parse_case(args.case.as_deref())?,
        valuation_cap: args.cap,
        workers: args.workers,
    };
    let format: RecordFormat = args
        .format
        .parse()
        .map_err(|e: String| CliError::Usage(e))?;
    let triples = c_range.is_some();

    if args.checkpoint || args.resume {
        if format != RecordFormat::Jsonl {
            return Err(CliError::Usage(
                "checkpointed scans require --format jsonl (the progress footer is a JSON line)"
                    .into(),
            ));
        }
        let path = args
            .out
            .as_ref()
            .expect("clap enforces --out for --checkpoint/--resume");
        let report = if triples {
            scan_triples_checkpointed(&cfg, path, args.resume)?
        } else {
            scan_pairs_checkpointed(&cfg, path, args.resume)?
        };
        print_summary(&report.summary, Some(&report), json)?;
        return Ok(if report.summary.anomalies > 0 { 2 } else { 0 });
    }

    let out = if triples {
        scan_triples(&cfg)?
    } else {
        scan_pairs(&cfg)?
    };
    match &args.out {
        Some(path) => {
            write_records(&out.records, format, path)?;
            print_summary(&out.summary, None, json)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            let streamed = write_records_to(&out.records, format, &mut lock).and_then(|_| {
                lock.flush().map_err(|e| Error::Io {
                    path: "<stdout>".into(),
                    records: out.summary.records,
                    source: e,
                })
            });
            if let Err(e) = streamed {
                // A reader that closed the pipe (`tbs scan ... | head`) is
                // normal termination, and the summary would describe records
                // nobody received — stay quiet.
                if let Error::Io { source, .. } = &e {
                    if source.kind() == io::ErrorKind::BrokenPipe {
                        return Ok(0);
                    }
                }
                return Err(e.into());
            }
            print_summary_to_stderr(&out.summary, json);
        }
    }
    Ok(if out.summary.anomalies > 0 { 2 } else { 0 })
}

// ------------------------------------------------------------ quotient

fn quotient(
    x: Option<BigUint>,
    y: Option<BigUint>,
    p: u32,
    frequency: bool,
    limit: Option<u64>,
    json: bool,
) -> Result<i32, CliError> {
    let mut w = io::stdout().lock();
    if frequency {
        if x.is_some() || y.is_some() {
            return Err(CliError::Usage(
                "--frequency takes no positional summands".into(),
            ));
        }
        let bound = limit.ok_or_else(|| {
            CliError::Usage("--frequency needs --limit <B> for the census square".into())
        })?;
        let census = frequency_report(p, bound)?;
        if json {
            writeln!(
                w,
                "{}",
                json!({
                    "p": census.p,
                    "bound": census.bound,
                    "case3_pairs": census.case3_pairs,
                    "exceptional": census.exceptional,
                    "ratio": [census.ratio.0, census.ratio.1],
                })
            )?;
        } else {
            writeln!(w, "p: {}", census.p)?;
            writeln!(w, "bound: {}", census.bound)?;
            writeln!(w, "case-3 pairs: {}", census.case3_pairs)?;
            writeln!(w, "exceptional: {}", census.exceptional)?;
            writeln!(w, "ratio: {}/{}", census.ratio.0, census.ratio.1)?;
        }
        return Ok(0);
    }

    match (x, y) {
        (Some(a), Some(b)) => {
            let check = fermat::exceptional_criterion(&a, &b, p)?;
            let t = &check.triple;
            if json {
                writeln!(
                    w,
                    "{}",
                    json!({
                        "a": a.to_string(),
                        "b": b.to_string(),
                        "p": t.p,
                        "mu_a": t.mu_a.to_string(),
                        "mu_b": t.mu_b.to_string(),
                        "mu_sum": t.mu_sum.to_string(),
                        "m": t.combination.to_string(),
                        "m_mod_p": check.residue.to_string(),
                        "case3": check.is_case3,
                        "exceptional": check.exceptional,
                    })
                )?;
            } else {
                writeln!(w, "p: {}", t.p)?;
                writeln!(w, "mu(a): {}", t.mu_a)?;
                writeln!(w, "mu(b): {}", t.mu_b)?;
                writeln!(w, "mu(a+b): {}", t.mu_sum)?;
                writeln!(w, "M = mu(a+b) - mu(a) - mu(b): {}", t.combination)?;
                writeln!(w, "M mod p: {}", check.residue)?;
                writeln!(w, "case 3: {}", yesno(check.is_case3))?;
                writeln!(w, "exceptional: {}", yesno(check.exceptional))?;
            }
            Ok(0)
        }
        (Some(x), None) => {
            let mu = fermat::mu(&x, p)?;
            let q = if (&x % BigUint::from(p)) == BigUint::from(0u32) {
                None
            } else {
                Some(fermat::fermat_quotient(&x, p)?)
            };
            if json {
                writeln!(
                    w,
                    "{}",
                    json!({
                        "x": x.to_string(),
                        "p": p,
                        "mu": mu.to_string(),
                        "q": q.as_ref().map(|v| v.to_string()),
                    })
                )?;
            } else {
                writeln!(w, "x: {x}")?;
                writeln!(w, "p: {p}")?;
                writeln!(w, "mu = (x^p - x)/p: {mu}")?;
                match q {
                    Some(q) => writeln!(w, "q = (x^(p-1) - 1)/p: {q}")?,
                    None => writeln!(w, "q: undefined (p divides x)")?,
                }
            }
            Ok(0)
        }
        _ => Err(CliError::Usage(
            "give one summand (mu and q), two summands (the pair criterion), or --frequency --limit <B>"
                .into(),
        )),
    }
}

// ----------------------------------------------------------- wieferich

fn wieferich(base: u64, limit: u64, power: u32, json: bool) -> Result<i32, CliError> {
    if power < 1 {
        return Err(CliError::Usage("--power must be at least 1".into()));
    }
    let hits = fermat::wieferich_scan(base, limit, power);
    let mut w = io::stdout().lock();
    if json {
        writeln!(
            w,
            "{}",
            json!({
                "base": base,
                "limit": limit,
                "power": power,
                "hits": hits,
            })
        )?;
    } else {
        for hit in &hits {
            writeln!(w, "p = {} (power {})", hit.prime, hit.max_power)?;
        }
        writeln!(
            w,
            "{} hit{} among odd primes <= {limit} for base {base} at power {power}",
            hits.len(),
            if hits.len() == 1 { "" } else { "s" },
        )?;
    }
    Ok(0)
}

// ------------------------------------------------------- verify-claims

fn verify_claims(workers: usize, json: bool) -> Result<i32, CliError> {
    let results = tbs_core::scan::claims::run_all(workers);
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut w = io::stdout().lock();
    if json {
        let claims: Vec<_> = results
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "title": r.title,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": r.seconds,
                })
            })
            .collect();
        writeln!(
            w,
            "{}",
            json!({
                "claims": claims,
                "passed": results.len() - failed,
                "failed": failed,
            })
        )?;
    } else {
        for r in &results {
            writeln!(
                w,
                "{} {}: {} ({}; {:.2} s)",
                r.id,
                r.title,
                if r.passed { "PASS" } else { "FAIL" },
                r.detail,
                r.seconds
            )?;
        }
        writeln!(
            w,
            "{}/{} claims passed",
            results.len() - failed,
            results.len()
        )?;
    }
    Ok(if failed > 0 { 2 } else { 0 })
}
