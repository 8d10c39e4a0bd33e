//! Record persistence: JSONL and CSV, write and read.
//!
//! Both encodings are line-oriented, UTF-8, LF-terminated, with big
//! integers as decimal strings. Serialization is fully deterministic:
//! the same record sequence always produces the same bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;

use super::record::{CaseTag, ScanRecord};
use crate::binomial::{Basis, Valuation};
use crate::{Error, Result};

/// On-disk encoding of a record stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordFormat {
    Jsonl,
    Csv,
}

impl FromStr for RecordFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(RecordFormat::Jsonl),
            "csv" => Ok(RecordFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected jsonl or csv)")),
        }
    }
}

/// CSV column order — identical to the JSONL key order.
pub const CSV_HEADER: [&str; 11] = [
    "a",
    "b",
    "c",
    "n",
    "case",
    "valuation",
    "predicted_bound",
    "basis",
    "anomaly",
    "exceptional",
    "extracted_gcd",
];

pub(crate) fn io_error(path: &Path, records: u64, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        records,
        source,
    }
}

/// One JSONL line (without the terminator) for a record.
pub(crate) fn jsonl_line(rec: &ScanRecord) -> String {
    serde_json::to_string(rec).expect("record serialization is infallible")
}

fn csv_row(rec: &ScanRecord) -> [String; 11] {
    [
        rec.a.to_string(),
        rec.b.to_string(),
        rec.c.as_ref().map(|c| c.to_string()).unwrap_or_default(),
        rec.n.to_string(),
        rec.case.as_str().to_string(),
        rec.valuation.to_string(),
        rec.predicted_bound.to_string(),
        rec.basis.tag().to_string(),
        rec.anomaly.to_string(),
        rec.exceptional.to_string(),
        rec.extracted_gcd.to_string(),
    ]
}

/// Serialize records into a writer; returns how many were written. On
/// failure the error reports the count of complete records that made it out
/// before the failure.
fn write_into<W: Write>(
    records: &[ScanRecord],
    format: RecordFormat,
    w: &mut W,
) -> std::result::Result<u64, (u64, std::io::Error)> {
    let mut written = 0u64;
    match format {
        RecordFormat::Jsonl => {
            for rec in records {
                let line = jsonl_line(rec);
                w.write_all(line.as_bytes()).map_err(|e| (written, e))?;
                w.write_all(b"\n").map_err(|e| (written, e))?;
                written += 1;
            }
        }
        RecordFormat::Csv => {
            let mut wtr = csv::WriterBuilder::new().from_writer(&mut *w);
            wtr.write_record(CSV_HEADER).map_err(|e| (written, to_io(e)))?;
            for rec in records {
                wtr.write_record(csv_row(rec))
                    .map_err(|e| (written, to_io(e)))?;
                written += 1;
            }
            wtr.flush().map_err(|e| (written, e))?;
        }
    }
    w.flush().map_err(|e| (written, e))?;
    Ok(written)
}

fn to_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

/// Write records to a file, creating or truncating it.
pub fn write_records(records: &[ScanRecord], format: RecordFormat, path: &Path) -> Result<u64> {
    let file = File::create(path).map_err(|e| io_error(path, 0, e))?;
    let mut w = BufWriter::new(file);
    write_into(records, format, &mut w).map_err(|(n, e)| io_error(path, n, e))
}

/// Write records into any writer (in-memory buffers included).
pub fn write_records_to<W: Write>(
    records: &[ScanRecord],
    format: RecordFormat,
    w: &mut W,
) -> Result<u64> {
    write_into(records, format, w)
        .map_err(|(n, e)| io_error(&PathBuf::from("<writer>"), n, e))
}

fn parse_jsonl_line(line: &str, line_no: usize) -> Result<Option<ScanRecord>> {
    match serde_json::from_str::<ScanRecord>(line) {
        Ok(rec) => Ok(Some(rec)),
        Err(record_err) => {
            // A checkpoint footer is a one-key object {"progress": ...};
            // plain readers skip it.
            if let Ok(serde_json::Value::Object(map)) =
                serde_json::from_str::<serde_json::Value>(line)
            {
                if map.len() == 1 && map.contains_key("progress") {
                    return Ok(None);
                }
            }
            Err(Error::MalformedRecord {
                line: line_no,
                reason: record_err.to_string(),
            })
        }
    }
}

fn field<'a>(
    row: &'a csv::StringRecord,
    idx: usize,
    line_no: usize,
) -> Result<&'a str> {
    row.get(idx).ok_or_else(|| Error::MalformedRecord {
        line: line_no,
        reason: format!("missing column {}", CSV_HEADER[idx]),
    })
}

fn parse_field<T>(raw: &str, what: &str, line_no: usize) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| Error::MalformedRecord {
        line: line_no,
        reason: format!("bad {what} {raw:?}: {e}"),
    })
}

fn parse_csv_row(row: &csv::StringRecord, line_no: usize) -> Result<ScanRecord> {
    let c_raw = field(row, 2, line_no)?;
    let c = if c_raw.is_empty() {
        None
    } else {
        Some(parse_field::<BigUint>(c_raw, "c", line_no)?)
    };
    Ok(ScanRecord {
        a: parse_field(field(row, 0, line_no)?, "a", line_no)?,
        b: parse_field(field(row, 1, line_no)?, "b", line_no)?,
        c,
        n: parse_field(field(row, 3, line_no)?, "n", line_no)?,
        case: parse_field::<CaseTag>(field(row, 4, line_no)?, "case", line_no)?,
        valuation: parse_field::<Valuation>(field(row, 5, line_no)?, "valuation", line_no)?,
        predicted_bound: parse_field(field(row, 6, line_no)?, "predicted_bound", line_no)?,
        basis: Basis::from_tag(field(row, 7, line_no)?).ok_or_else(|| {
            Error::MalformedRecord {
                line: line_no,
                reason: format!("unknown basis tag {:?}", field(row, 7, line_no).unwrap_or("")),
            }
        })?,
        anomaly: parse_field(field(row, 8, line_no)?, "anomaly", line_no)?,
        exceptional: parse_field(field(row, 9, line_no)?, "exceptional", line_no)?,
        extracted_gcd: parse_field(field(row, 10, line_no)?, "extracted_gcd", line_no)?,
    })
}

/// Read records back from any buffered reader. JSONL input may end with a
/// checkpoint footer, which is skipped.
pub fn read_records_from<R: BufRead>(r: R, format: RecordFormat) -> Result<Vec<ScanRecord>> {
    match format {
        RecordFormat::Jsonl => {
            let mut out = Vec::new();
            for (i, line) in r.lines().enumerate() {
                let line = line.map_err(|e| io_error(&PathBuf::from("<reader>"), out.len() as u64, e))?;
                if line.is_empty() {
                    continue;
                }
                if let Some(rec) = parse_jsonl_line(&line, i + 1)? {
                    out.push(rec);
                }
            }
            Ok(out)
        }
        RecordFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
            let mut rows = rdr.records();
            let header = match rows.next() {
                None => return Ok(Vec::new()),
                Some(h) => h.map_err(|e| Error::MalformedRecord {
                    line: 1,
                    reason: e.to_string(),
                })?,
            };
            let expected: Vec<&str> = CSV_HEADER.to_vec();
            let got: Vec<&str> = header.iter().collect();
            if got != expected {
                return Err(Error::MalformedRecord {
                    line: 1,
                    reason: format!("unexpected header {got:?}"),
                });
            }
            let mut out = Vec::new();
            for (i, row) in rows.enumerate() {
                let line_no = i + 2;
                let row = row.map_err(|e| Error::MalformedRecord {
                    line: line_no,
                    reason: e.to_string(),
                })?;
                out.push(parse_csv_row(&row, line_no)?);
            }
            Ok(out)
        }
    }
}

/// Read records back from a file.
pub fn read_records(path: &Path, format: RecordFormat) -> Result<Vec<ScanRecord>> {
    let file = File::open(path).map_err(|e| io_error(path, 0, e))?;
    read_records_from(BufReader::new(file), format)
}
