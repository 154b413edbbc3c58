//! CSV ingestion of rating logs.
//!
//! Records are `rater,ratee,score,epoch_seconds`, no header. A header line is
//! tolerated when its first field is non-numeric. Plain and gzip input are
//! both accepted; gzip is detected from the magic bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};
use crate::model::{EventLog, RatingEvent, Timestamp, UserId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IngestMode {
    Strict,
    #[default]
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line number.
    pub line: usize,
    pub content: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub kept: usize,
    pub rejected: Vec<Rejection>,
    pub users: usize,
    pub header_skipped: bool,
}

/// Parses one record. The timestamp may carry a fractional part, which is
/// floored to whole seconds.
pub fn parse_record(line: &str) -> std::result::Result<RatingEvent, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let rater: u64 = fields[0]
        .parse()
        .map_err(|_| format!("rater {:?} is not a non-negative integer", fields[0]))?;
    let ratee: u64 = fields[1]
        .parse()
        .map_err(|_| format!("ratee {:?} is not a non-negative integer", fields[1]))?;
    let score: i64 = fields[2]
        .parse()
        .map_err(|_| format!("score {:?} is not an integer", fields[2]))?;
    let timestamp =
        parse_epoch(fields[3]).ok_or_else(|| format!("timestamp {:?} is not an epoch second value", fields[3]))?;
    RatingEvent::new(UserId(rater), UserId(ratee), score, timestamp).map_err(|e| e.to_string())
}

fn parse_epoch(s: &str) -> Option<Timestamp> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    let whole: i64 = int_part.parse().ok()?;
    match frac_part {
        None => Some(whole),
        Some(f) if !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()) => {
            let has_fraction = f.bytes().any(|b| b != b'0');
            if has_fraction && int_part.starts_with('-') {
                Some(whole - 1)
            } else {
                Some(whole)
            }
        }
        Some(_) => None,
    }
}

fn looks_like_header(line: &str) -> bool {
    let first = line.split(',').next().unwrap_or("").trim();
    !first.is_empty() && first.parse::<i64>().is_err()
}

/// Reads a log from any buffered source.
pub fn ingest<R: BufRead>(reader: R, mode: IngestMode) -> Result<(EventLog, IngestReport)> {
    let mut events = Vec::new();
    let mut report = IngestReport::default();
    let mut saw_line = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !saw_line {
            saw_line = true;
            if looks_like_header(trimmed) {
                report.header_skipped = true;
                continue;
            }
        }
        match parse_record(trimmed) {
            Ok(e) => events.push(e),
            Err(reason) => {
                if mode == IngestMode::Strict {
                    return Err(Error::Malformed { line: idx + 1, reason });
                }
                log::debug!("line {}: rejected ({reason})", idx + 1);
                report.rejected.push(Rejection {
                    line: idx + 1,
                    content: trimmed.to_string(),
                    reason,
                });
            }
        }
    }

    if !saw_line {
        return Err(Error::EmptyInput);
    }
    let log = EventLog::from_events(events);
    report.kept = log.len();
    report.users = log.users().len();
    Ok((log, report))
}

/// Wraps `reader` in a gzip decoder when the stream starts with the gzip magic.
pub fn decompressing_reader<R: Read + 'static>(reader: R) -> Result<Box<dyn BufRead>> {
    let mut buffered = BufReader::new(reader);
    let is_gzip = buffered.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if is_gzip {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(buffered))))
    } else {
        Ok(Box::new(buffered))
    }
}

pub fn ingest_path(path: &Path, mode: IngestMode) -> Result<(EventLog, IngestReport)> {
    let file = File::open(path)?;
    ingest(decompressing_reader(file)?, mode)
}

pub fn ingest_bytes(bytes: &[u8], mode: IngestMode) -> Result<(EventLog, IngestReport)> {
    ingest(decompressing_reader(std::io::Cursor::new(bytes.to_vec()))?, mode)
}

/// Writes a log in the ingest format, preceded by a header line.
pub fn write_log<W: Write>(log: &EventLog, mut out: W) -> Result<()> {
    writeln!(out, "rater,ratee,score,epoch_seconds")?;
    for e in log.events() {
        writeln!(out, "{},{},{},{}", e.rater, e.ratee, e.score.value(), e.timestamp)?;
    }
    out.flush()?;
    Ok(())
}
