//! Per-tweet scores (`tweet_id,score`) and daily series (`date,value,coverage`).

use std::collections::BTreeMap;
use std::path::Path;

use episense_core::sentiment::DailySentiment;
use episense_core::NaiveDate;

use super::{check_header, csv_reader, csv_writer, finish, parse_field, read_text, write_record};
use crate::error::{CliError, Result};

pub const SCORE_HEADER: [&str; 2] = ["tweet_id", "score"];
pub const DAILY_HEADER: [&str; 3] = ["date", "value", "coverage"];

pub fn parse_scores(text: &str, source: &str) -> Result<BTreeMap<String, f64>> {
    let mut rdr = csv_reader(text);
    check_header(&mut rdr, &SCORE_HEADER, source)?;
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{source}: {e}")))?;
        let score: f64 = parse_field(&rec, 1, "score", source)?;
        if !score.is_finite() {
            return Err(CliError::data(format!("{source}: non-finite score for {}", &rec[0])));
        }
        if out.insert(rec[0].to_string(), score).is_some() {
            return Err(CliError::data(format!("{source}: duplicate tweet id {}", &rec[0])));
        }
    }
    Ok(out)
}

pub fn read_scores(path: &Path) -> Result<BTreeMap<String, f64>> {
    parse_scores(&read_text(path)?, &path.display().to_string())
}

pub fn render_scores(scores: &BTreeMap<String, f64>) -> String {
    let mut w = csv_writer();
    write_record(&mut w, SCORE_HEADER);
    for (id, s) in scores {
        write_record(&mut w, [id.clone(), s.to_string()]);
    }
    finish(w)
}

pub fn parse_daily(text: &str, source: &str) -> Result<DailySentiment> {
    let mut rdr = csv_reader(text);
    check_header(&mut rdr, &DAILY_HEADER, source)?;
    let mut start: Option<NaiveDate> = None;
    let mut values = Vec::new();
    let mut coverage = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{source}: {e}")))?;
        let date: NaiveDate = parse_field(&rec, 0, "date", source)?;
        let first = *start.get_or_insert(date);
        if date != first + chrono::Duration::days(values.len() as i64) {
            return Err(CliError::data(format!(
                "{source}:{}: dates must be consecutive, found {date}",
                rec.position().map_or(0, |p| p.line())
            )));
        }
        values.push(parse_field(&rec, 1, "value", source)?);
        coverage.push(parse_field(&rec, 2, "coverage", source)?);
    }
    let start = start.ok_or_else(|| CliError::data(format!("{source}: no rows")))?;
    DailySentiment::new(start, values, coverage).map_err(|e| CliError::from(e).context(source))
}

pub fn read_daily(path: &Path) -> Result<DailySentiment> {
    parse_daily(&read_text(path)?, &path.display().to_string())
}

pub fn render_daily(daily: &DailySentiment) -> String {
    let mut w = csv_writer();
    write_record(&mut w, DAILY_HEADER);
    for (i, (v, c)) in daily.values().iter().zip(daily.coverage()).enumerate() {
        write_record(&mut w, [daily.date_at(i).to_string(), v.to_string(), c.to_string()]);
    }
    finish(w)
}
