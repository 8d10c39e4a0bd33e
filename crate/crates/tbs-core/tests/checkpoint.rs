//! End-to-end coverage of checkpointed scans: fresh runs, resumption from a
//! partial file, the footer-less fallback, and rejection of mismatched
//! checkpoints.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;

use tbs_core::scan::{
    read_checkpoint, scan_pairs, scan_pairs_checkpointed, scan_triples,
    scan_triples_checkpointed, write_records, ExponentSet, Progress, RecordFormat, ScanConfig,
    ScanRecord,
};
use tbs_core::Error;

fn cfg() -> ScanConfig {
    ScanConfig {
        a_range: (1, 20),
        b_range: (1, 20),
        exponents: ExponentSet::List(vec![3, 5]),
        ..ScanConfig::default()
    }
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap()
}

#[test]
fn fresh_checkpointed_run_matches_plain_write() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.jsonl");
    let checked = dir.path().join("checked.jsonl");

    let out = scan_pairs(&cfg()).unwrap();
    write_records(&out.records, RecordFormat::Jsonl, &plain).unwrap();

    let report = scan_pairs_checkpointed(&cfg(), &checked, false).unwrap();
    assert_eq!(report.summary, out.summary);
    assert_eq!(report.resumed_from, None);
    assert!(report.slices_run > 0);

    assert_eq!(read(&plain), read(&checked), "checkpointed bytes differ");

    // The finished file carries no footer.
    let (records, progress) = read_checkpoint(&checked).unwrap();
    assert_eq!(records, out.records);
    assert_eq!(progress, None);
}

#[test]
fn fresh_checkpointed_triple_run_matches_plain_write() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.jsonl");
    let checked = dir.path().join("checked.jsonl");
    let cfg = ScanConfig {
        a_range: (1, 6),
        b_range: (1, 6),
        c_range: Some((1, 6)),
        exponents: ExponentSet::List(vec![2, 3]),
        ..ScanConfig::default()
    };

    let out = scan_triples(&cfg).unwrap();
    write_records(&out.records, RecordFormat::Jsonl, &plain).unwrap();
    let report = scan_triples_checkpointed(&cfg, &checked, false).unwrap();
    assert_eq!(report.summary, out.summary);
    assert_eq!(read(&plain), read(&checked));
}

/// Truncate a finished JSONL file down to the records of the slices through
/// `(n, a)` and append the matching footer — exactly what a run killed after
/// committing that slice leaves behind.
fn craft_partial(full: &Path, partial: &Path, n: u32, a: u64) {
    let text = fs::read_to_string(full).unwrap();
    let mut kept = String::new();
    for line in text.lines() {
        let rec: ScanRecord = serde_json::from_str(line).unwrap();
        if rec.n == n && rec.a <= BigUint::from(a) || rec.n < n {
            kept.push_str(line);
            kept.push('\n');
        }
    }
    kept.push_str(&format!("{{\"progress\":{{\"n\":{n},\"a\":{a}}}}}\n"));
    fs::write(partial, kept).unwrap();
}

#[test]
fn resume_completes_a_partial_file_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let partial = dir.path().join("partial.jsonl");

    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();

    // The a-range of 20 splits into single-a slices, so any (n, a) in range
    // is a slice boundary.
    craft_partial(&full, &partial, 3, 7);
    let (_, progress) = read_checkpoint(&partial).unwrap();
    assert_eq!(progress, Some(Progress { n: 3, a: 7 }));

    let report = scan_pairs_checkpointed(&cfg(), &partial, true).unwrap();
    assert_eq!(report.resumed_from, Some(Progress { n: 3, a: 7 }));
    assert!(report.slices_run > 0);
    assert_eq!(
        read(&full),
        read(&partial),
        "resumed file differs from a straight-through run"
    );

    // Summary covers the whole file, prefix included.
    let fresh = scan_pairs(&cfg()).unwrap();
    assert_eq!(report.summary, fresh.summary);
}

#[test]
fn resume_across_exponent_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let partial = dir.path().join("partial.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();

    // Last slice of n = 3: the next work is all of n = 5.
    craft_partial(&full, &partial, 3, 20);
    let report = scan_pairs_checkpointed(&cfg(), &partial, true).unwrap();
    assert_eq!(report.resumed_from, Some(Progress { n: 3, a: 20 }));
    assert_eq!(read(&full), read(&partial));
}

#[test]
fn footerless_file_is_rescanned_from_scratch() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let stale = dir.path().join("stale.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();

    // A few valid record lines but no footer: without the marker there is
    // no trustworthy progress point, so the scan starts over.
    let text = fs::read_to_string(&full).unwrap();
    let prefix: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    fs::write(&stale, prefix).unwrap();

    let report = scan_pairs_checkpointed(&cfg(), &stale, true).unwrap();
    assert_eq!(report.resumed_from, None);
    assert_eq!(read(&full), read(&stale));
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let partial = dir.path().join("partial.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();
    craft_partial(&full, &partial, 3, 7);

    // Same file, different scan: the footer's slice does not exist here.
    let other = ScanConfig {
        exponents: ExponentSet::List(vec![7]),
        ..cfg()
    };
    let err = scan_pairs_checkpointed(&other, &partial, true).unwrap_err();
    assert!(matches!(err, Error::BadScanConfig(_)), "got {err}");
    // The mismatch is reported before anything is written.
    let (_, progress) = read_checkpoint(&partial).unwrap();
    assert_eq!(progress, Some(Progress { n: 3, a: 7 }));
}

#[test]
fn content_after_footer_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let bad = dir.path().join("bad.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();

    let text = fs::read_to_string(&full).unwrap();
    let mut lines = text.lines();
    let first = lines.next().unwrap();
    let second = lines.next().unwrap();
    fs::write(
        &bad,
        format!("{first}\n{{\"progress\":{{\"n\":3,\"a\":1}}}}\n{second}\n"),
    )
    .unwrap();

    let err = read_checkpoint(&bad).unwrap_err();
    assert!(
        matches!(err, Error::MalformedRecord { line: 3, .. }),
        "got {err}"
    );
}

#[test]
fn resume_with_footer_on_final_slice_just_strips_it() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let partial = dir.path().join("partial.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();

    // All records present, footer still naming the very last slice — a run
    // killed right before the closing truncate.
    craft_partial(&full, &partial, 5, 20);
    let report = scan_pairs_checkpointed(&cfg(), &partial, true).unwrap();
    assert_eq!(report.resumed_from, Some(Progress { n: 5, a: 20 }));
    assert_eq!(report.slices_run, 0);
    assert_eq!(read(&full), read(&partial));
    assert_eq!(report.summary, scan_pairs(&cfg()).unwrap().summary);
}

#[test]
fn resume_of_a_finished_file_is_a_clean_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    scan_pairs_checkpointed(&cfg(), &full, false).unwrap();
    let before = read(&full);

    // A finished file has no footer, so a resume simply redoes the scan —
    // and lands on identical bytes.
    let report = scan_pairs_checkpointed(&cfg(), &full, true).unwrap();
    assert_eq!(report.resumed_from, None);
    assert_eq!(read(&full), before);
}
