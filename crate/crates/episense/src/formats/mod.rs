//! Readers and writers for every file the pipeline consumes or produces.
//!
//! Parsers take the file contents plus a label used in error messages, so
//! they can be tested without touching the filesystem.

pub mod cases;
pub mod concepts;
pub mod embeddings;
pub mod lexicon;
pub mod sentiment;
pub mod tables;
pub mod tweets;

use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// CSV reader that skips `#` comment lines and trims fields.
fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str], source: &str) -> Result<()> {
    let headers = rdr
        .headers()
        .map_err(|e| CliError::data(format!("{source}: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if !got.iter().map(|h| h.to_ascii_lowercase()).eq(expected.iter().map(|h| h.to_string())) {
        return Err(CliError::data(format!(
            "{source}: expected header {:?}, found {:?}",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

/// Line number of a record for error messages (1-based, header is line 1).
fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize, name: &str, source: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = record.get(idx).unwrap_or("");
    raw.parse().map_err(|e| {
        CliError::data(format!("{source}:{}: bad {name} {raw:?}: {e}", line_of(record)))
    })
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn write_record<I, T>(w: &mut csv::Writer<Vec<u8>>, fields: I)
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(fields).expect("writing to memory cannot fail");
}
