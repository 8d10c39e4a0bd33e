//! Black-box tests of the `tbs` binary: output formats, exit codes, and
//! cross-worker determinism, all through real process invocations.

use std::path::Path;
use std::process::{Command, Output};

fn tbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbs"))
        .args(args)
        .output()
        .expect("failed to spawn tbs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited via signal")
}

#[test]
fn analyze_prints_known_instance() {
    let out = tbs(&["analyze", "1", "2", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("case: 2"), "{text}");
    assert!(text.contains("U: 18"), "{text}");
    assert!(text.contains("valuation: 2"), "{text}");
    assert!(text.contains("valuation >= 2"), "{text}");
    assert!(text.contains("anomaly: no"), "{text}");
}

#[test]
fn analyze_json_flags_the_exceptional_pair() {
    let out = tbs(&["analyze", "1", "2", "--n", "7", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["a"], "1");
    assert_eq!(v["b"], "2");
    assert_eq!(v["n"], 7);
    assert_eq!(v["case"], "3");
    assert_eq!(v["u"], "2058");
    assert_eq!(v["valuation"], "3");
    assert_eq!(v["predicted_bound"], 1);
    assert_eq!(v["basis"], "I.10a");
    assert_eq!(v["exceptional"], true);
    assert_eq!(v["anomaly"], false);
}

#[test]
fn analyze_handles_triples() {
    let out = tbs(&["analyze", "1", "2", "3", "--n", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["case"], "t2");
    assert_eq!(v["u"], "180");
    assert_eq!(v["valuation"], "2");
    assert_eq!(v["basis"], "II.4a");
}

#[test]
fn analyze_takes_huge_inputs_without_materializing() {
    // (2^2000 + 1)^997 has around two million bits: far past the
    // materialization limit, so only the capped modular route runs and the
    // series value is reported as null.
    let a: num_bigint::BigUint = num_bigint::BigUint::from(1u32) << 2000u32;
    let out = tbs(&["analyze", &a.to_string(), "1", "--n", "997", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["u"], serde_json::Value::Null);
    assert_eq!(v["case"], "3");
    assert_eq!(v["predicted_bound"], 1);
    assert_eq!(v["anomaly"], false);
    // The bound is certified even though U was never built.
    let val = v["valuation"].as_str().unwrap();
    assert!(
        val.parse::<u32>().map(|x| x >= 1).unwrap_or(false),
        "unexpected valuation {val:?}"
    );

    // Small exponents on the same huge input still materialize and agree:
    // U(a, 1) = 3a(a + 1) at n = 3 with a = 1 (mod 3) has valuation 1.
    let out = tbs(&["analyze", &a.to_string(), "1", "--n", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert!(v["u"].is_string());
    assert_eq!(v["valuation"], "1");
    assert_eq!(v["case"], "3");
}

#[test]
fn exit_codes_separate_error_classes() {
    // Usage problems and domain errors: 1.
    assert_eq!(code(&tbs(&["analyze", "1", "2"])), 1); // missing --n
    assert_eq!(code(&tbs(&["analyze", "0", "2", "--n", "3"])), 1); // zero summand
    assert_eq!(code(&tbs(&["scan", "--a-range", "1:3"])), 1); // no exponents
    assert_eq!(code(&tbs(&["scan", "--n", "3", "--nope"])), 1); // unknown flag
    assert_eq!(code(&tbs(&["quotient", "4", "--n", "6"])), 1); // composite p
    assert_eq!(code(&tbs(&["scan", "--n", "1"])), 1); // exponent below 2

    // Help and version: 0.
    assert_eq!(code(&tbs(&["--help"])), 0);
    assert_eq!(code(&tbs(&["--version"])), 0);

    // I/O failures: 3.
    let out = tbs(&[
        "scan",
        "--n",
        "3",
        "--out",
        "/nonexistent-directory/records.jsonl",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr_of(&out).contains("error:"));
}

#[test]
fn wieferich_reports_known_hits() {
    let out = tbs(&["wieferich", "--base", "3", "--limit", "100", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["hits"].as_array().unwrap().len(), 1);
    assert_eq!(v["hits"][0]["prime"], 11);
    assert_eq!(v["hits"][0]["max_power"], 2);

    let human = tbs(&["wieferich", "--base", "3", "--limit", "100"]);
    let text = stdout_of(&human);
    assert!(text.contains("p = 11"), "{text}");
    assert!(text.contains("1 hit"), "{text}");
}

#[test]
fn scan_stdout_carries_records_and_stderr_the_summary() {
    let out = tbs(&["scan", "--n", "3", "--a-range", "1:3", "--b-range", "1:3"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7, "{text}");
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["a"].is_string());
    }
    assert!(stderr_of(&out).contains("records: 7"));
}

#[test]
fn scan_csv_starts_with_the_header() {
    let out = tbs(&[
        "scan", "--n", "3", "--a-range", "1:2", "--b-range", "1:2", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(
        text.starts_with("a,b,c,n,case,valuation,predicted_bound,basis,anomaly,exceptional,extracted_gcd\n"),
        "{text}"
    );
}

#[test]
fn scan_output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, path: &Path| {
        let out = tbs(&[
            "scan",
            "--n-range",
            "2:7",
            "--a-range",
            "1:40",
            "--b-range",
            "1:40",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
            "--json",
        ]);
        assert_eq!(code(&out), 0);
        stdout_of(&out)
    };
    let p1 = dir.path().join("w1.jsonl");
    let p4 = dir.path().join("w4.jsonl");
    let s1 = run("1", &p1);
    let s4 = run("4", &p4);
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p4).unwrap());
    assert_eq!(s1, s4, "summaries differ");
    let v: serde_json::Value = serde_json::from_str(s1.trim()).unwrap();
    assert_eq!(v["anomalies"], 0);
}

#[test]
fn scan3_applies_trinomial_filters() {
    let out = tbs(&[
        "scan3", "--n", "3", "--a-range", "1:6", "--b-range", "1:6", "--c-range", "1:6",
        "--case", "t2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["case"], "t2");
        assert!(v["c"].is_string());
    }
    // The (1,2,3) record measures valuation 2.
    let rec = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["a"] == "1" && v["b"] == "2" && v["c"] == "3")
        .expect("record for (1,2,3)");
    assert_eq!(rec["valuation"], "2");

    // Binomial filters are rejected on triple scans.
    let bad = tbs(&[
        "scan3", "--n", "3", "--a-range", "1:2", "--b-range", "1:2", "--c-range", "1:2",
        "--case", "1",
    ]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn quotient_json_reports_the_pair_criterion() {
    let out = tbs(&["quotient", "1", "2", "--n", "7", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["mu_a"], "0");
    assert_eq!(v["mu_b"], "18");
    assert_eq!(v["mu_sum"], "312");
    assert_eq!(v["m"], "294");
    assert_eq!(v["case3"], true);
    assert_eq!(v["exceptional"], true);

    let census = tbs(&["quotient", "--frequency", "--limit", "50", "--n", "5", "--json"]);
    assert_eq!(code(&census), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&census).trim()).unwrap();
    assert_eq!(v["case3_pairs"], 765);
    assert_eq!(v["exceptional"], 0);
    assert_eq!(v["ratio"], serde_json::json!([0, 1]));
}

#[test]
fn checkpointed_scan_resumes_to_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let partial = dir.path().join("partial.jsonl");

    let base = [
        "scan", "--n-range", "3:5", "--a-range", "1:20", "--b-range", "1:20",
    ];
    let mut args: Vec<&str> = base.to_vec();
    let full_s = full.to_str().unwrap().to_string();
    args.extend(["--out", &full_s, "--checkpoint"]);
    assert_eq!(code(&tbs(&args)), 0);

    // Keep the records of the slices through (n=3, a=4) plus their footer.
    let text = std::fs::read_to_string(&full).unwrap();
    let mut kept = String::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v["n"] == 3 && v["a"].as_str().unwrap().parse::<u64>().unwrap() <= 4 {
            kept.push_str(line);
            kept.push('\n');
        }
    }
    kept.push_str("{\"progress\":{\"n\":3,\"a\":4}}\n");
    std::fs::write(&partial, kept).unwrap();

    let mut args: Vec<&str> = base.to_vec();
    let partial_s = partial.to_str().unwrap().to_string();
    args.extend(["--out", &partial_s, "--resume", "--json"]);
    let out = tbs(&args);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["resumed_from"], serde_json::json!({"n": 3, "a": 4}));

    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&partial).unwrap());
}

#[test]
fn verify_claims_passes_end_to_end() {
    let out = tbs(&["verify-claims"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let pass_lines = text.lines().filter(|l| l.contains(": PASS")).count();
    assert_eq!(pass_lines, 10, "{text}");
    assert!(!text.contains(": FAIL"), "{text}");
    assert!(text.contains("10/10 claims passed"), "{text}");
}

#[test]
fn verify_claims_json_is_structured() {
    let out = tbs(&["verify-claims", "--json", "--workers", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(v["passed"], 10);
    assert_eq!(v["failed"], 0);
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 10);
    assert_eq!(claims[0]["id"], "c01");
    assert!(claims.iter().all(|c| c["passed"] == true));
}

#[test]
fn closing_the_output_pipe_ends_the_scan_quietly() {
    use std::io::{BufRead, BufReader, Read};
    use std::process::Stdio;

    // A sweep whose record stream far exceeds the pipe buffer, so the
    // writer is guaranteed to hit the closed pipe after the reader stops.
    let mut child = Command::new(env!("CARGO_BIN_EXE_tbs"))
        .args(["scan", "--n-range", "2:9", "--a-range", "1:60", "--b-range", "1:60"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("failed to spawn tbs");

    let mut first = String::new();
    {
        let stdout = child.stdout.take().expect("piped stdout");
        let mut reader = BufReader::new(stdout);
        reader
            .read_line(&mut first)
            .expect("read one record line");
        // Dropping the reader closes our end of the pipe.
    }
    assert!(first.trim_start().starts_with('{'), "{first}");

    let status = child.wait().expect("wait for tbs");
    let mut stderr = String::new();
    child
        .stderr
        .take()
        .expect("piped stderr")
        .read_to_string(&mut stderr)
        .expect("read stderr");

    // Downstream hanging up is normal termination: clean exit, no panic
    // backtrace, no error message, and no summary for records nobody got.
    assert_eq!(status.code(), Some(0), "stderr: {stderr}");
    assert!(!stderr.contains("panicked"), "{stderr}");
    assert!(!stderr.contains("error:"), "{stderr}");
    assert!(!stderr.contains("records:"), "{stderr}");
}
