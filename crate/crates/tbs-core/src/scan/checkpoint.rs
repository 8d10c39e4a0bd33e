//! Checkpointed scans: JSONL output that survives interruption.
//!
//! While a scan runs, the file ends with a footer line
//! `{"progress": {"n": N, "a": A}}` naming the last fully written slice
//! (exponent `N`, `a`-chunk ending at `A`). Each completed slice appends
//! its records and replaces the footer. On completion the footer is
//! removed, leaving a file byte-identical to a plain [`write_records`]
//! dump of the same scan — determinism is preserved across interruptions.
//!
//! Resuming reads the footer, folds the already-written records into the
//! summary, and continues with the first slice after the recorded one.
//! A file without a footer (including one left by a crash in the tiny
//! truncate-and-append window) is not trusted as partial output: the scan
//! restarts from scratch, which is always correct because slice output is
//! deterministic.

use std::fs::File;
use std::io::{Seek, SeekFrom, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::io::{io_error, jsonl_line};
use super::record::ScanRecord;
use super::{
    build_slices, process_pair_slice, process_triple_slice, ScanConfig, ScanSummary, Slice,
};
use crate::{Error, Result};

/// The last fully persisted slice: its exponent and the end of its
/// `a`-chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub n: u32,
    pub a: u64,
}

#[derive(Serialize, Deserialize)]
struct FooterLine {
    progress: Progress,
}

/// What a checkpointed run did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckpointReport {
    /// Summary over the full output file (resumed records included).
    pub summary: ScanSummary,
    /// Where the run picked up, if it resumed a partial file.
    pub resumed_from: Option<Progress>,
    /// Slices processed by this call (0 when the resumed footer already
    /// named the final slice).
    pub slices_run: u64,
}

/// Read a checkpoint file: all records plus the footer, if one is present.
/// The footer may only be the final line.
pub fn read_checkpoint(path: &Path) -> Result<(Vec<ScanRecord>, Option<Progress>)> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, 0, e))?;
    let mut records = Vec::new();
    let mut progress = None;
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        if progress.is_some() {
            return Err(Error::MalformedRecord {
                line: i + 1,
                reason: "content after the checkpoint footer".into(),
            });
        }
        if let Ok(footer) = serde_json::from_str::<FooterLine>(line) {
            progress = Some(footer.progress);
            continue;
        }
        match serde_json::from_str::<ScanRecord>(line) {
            Ok(rec) => records.push(rec),
            Err(e) => {
                return Err(Error::MalformedRecord {
                    line: i + 1,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok((records, progress))
}

fn footer_bytes(slice: &Slice) -> Vec<u8> {
    let mut line = serde_json::to_string(&FooterLine {
        progress: Progress {
            n: slice.n,
            a: slice.a_hi,
        },
    })
    .expect("footer serialization is infallible");
    line.push('\n');
    line.into_bytes()
}

fn run_checkpointed<F>(
    cfg: &ScanConfig,
    path: &Path,
    resume: bool,
    process: F,
) -> Result<CheckpointReport>
where
    F: Fn(&ScanConfig, &Slice) -> Result<Vec<ScanRecord>> + Sync,
{
    let slices = build_slices(cfg)?;

    let mut summary = ScanSummary::default();
    let mut resumed_from = None;
    let mut prefix: Vec<ScanRecord> = Vec::new();
    if resume && path.exists() {
        let (records, progress) = read_checkpoint(path)?;
        if let Some(p) = progress {
            resumed_from = Some(p);
            prefix = records;
        }
    }

    let start = match resumed_from {
        None => 0,
        Some(p) => {
            slices
                .iter()
                .position(|s| s.n == p.n && s.a_hi == p.a)
                .ok_or_else(|| {
                    Error::BadScanConfig(format!(
                        "checkpoint progress (n={}, a={}) does not match this scan's slices",
                        p.n, p.a
                    ))
                })?
                + 1
        }
    };

    // Rewrite the retained prefix in canonical form, then append slice by
    // slice, keeping a footer after the last completed slice.
    let mut file = File::create(path).map_err(|e| io_error(path, 0, e))?;
    let mut written_records = 0u64;
    {
        let mut buf = Vec::new();
        for rec in &prefix {
            buf.extend_from_slice(jsonl_line(rec).as_bytes());
            buf.push(b'\n');
            summary.absorb(rec);
        }
        file.write_all(&buf)
            .map_err(|e| io_error(path, written_records, e))?;
        written_records = prefix.len() as u64;
    }
    drop(prefix);

    let mut end_of_records = file
        .stream_position()
        .map_err(|e| io_error(path, written_records, e))?;
    let mut have_footer = false;
    let mut slices_run = 0u64;

    for slice in &slices[start..] {
        let records = process(cfg, slice)?;
        let mut buf = Vec::new();
        for rec in &records {
            buf.extend_from_slice(jsonl_line(rec).as_bytes());
            buf.push(b'\n');
            summary.absorb(rec);
        }
        if have_footer {
            file.set_len(end_of_records)
                .map_err(|e| io_error(path, written_records, e))?;
            file.seek(SeekFrom::Start(end_of_records))
                .map_err(|e| io_error(path, written_records, e))?;
        }
        file.write_all(&buf)
            .map_err(|e| io_error(path, written_records, e))?;
        file.write_all(&footer_bytes(slice))
            .map_err(|e| io_error(path, written_records, e))?;
        file.sync_data()
            .map_err(|e| io_error(path, written_records, e))?;
        end_of_records += buf.len() as u64;
        written_records += records.len() as u64;
        have_footer = true;
        slices_run += 1;
    }

    if have_footer {
        file.set_len(end_of_records)
            .map_err(|e| io_error(path, written_records, e))?;
    }
    file.sync_data()
        .map_err(|e| io_error(path, written_records, e))?;

    Ok(CheckpointReport {
        summary,
        resumed_from,
        slices_run,
    })
}

/// [`super::scan_pairs`], streamed to a JSONL file with checkpointing.
pub fn scan_pairs_checkpointed(
    cfg: &ScanConfig,
    path: &Path,
    resume: bool,
) -> Result<CheckpointReport> {
    cfg.validate_pairs()?;
    run_checkpointed(cfg, path, resume, process_pair_slice)
}

/// [`super::scan_triples`], streamed to a JSONL file with checkpointing.
pub fn scan_triples_checkpointed(
    cfg: &ScanConfig,
    path: &Path,
    resume: bool,
) -> Result<CheckpointReport> {
    cfg.validate_triples()?;
    run_checkpointed(cfg, path, resume, process_triple_slice)
}

// Integration coverage lives in tests/checkpoint.rs; the unit tests here
// pin the footer encoding itself.
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn footer_encoding_is_stable() {
        let bytes = footer_bytes(&Slice {
            n: 7,
            a_lo: 1,
            a_hi: 40,
        });
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "{\"progress\":{\"n\":7,\"a\":40}}\n"
        );
    }

    #[test]
    fn footer_parses_back() {
        let f: FooterLine = serde_json::from_str("{\"progress\":{\"n\":7,\"a\":40}}").unwrap();
        assert_eq!(f.progress, Progress { n: 7, a: 40 });
        // A record line must not parse as a footer.
        assert!(serde_json::from_str::<FooterLine>(
            "{\"a\":\"1\",\"b\":\"2\",\"n\":3,\"progress\":4}"
        )
        .is_err());
    }
}
