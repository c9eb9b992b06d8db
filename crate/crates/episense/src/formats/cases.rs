//! Case CSV: `date,new_cases,recovered,deaths`.

use std::fmt::Write as _;
use std::path::Path;

use episense_core::corpus::{CaseRow, RegionSeries};
use episense_core::series::DailySeries;
use episense_core::NaiveDate;

use super::{check_header, csv_reader, parse_field, read_text};
use crate::error::{CliError, Result};

pub const HEADER: [&str; 4] = ["date", "new_cases", "recovered", "deaths"];

pub fn parse(text: &str, region: &str, zero_fill: bool, source: &str) -> Result<RegionSeries> {
    let mut rdr = csv_reader(text);
    check_header(&mut rdr, &HEADER, source)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{source}: {e}")))?;
        rows.push(CaseRow {
            date: parse_field::<NaiveDate>(&rec, 0, "date", source)?,
            new_cases: parse_field(&rec, 1, "new_cases", source)?,
            recovered: parse_field(&rec, 2, "recovered", source)?,
            deaths: parse_field(&rec, 3, "deaths", source)?,
        });
    }
    RegionSeries::from_rows(region, rows, zero_fill).map_err(|e| CliError::from(e).context(source))
}

/// Reads a case file; the region id is the file stem.
pub fn read(path: &Path, zero_fill: bool) -> Result<RegionSeries> {
    let text = read_text(path)?;
    let region = path.file_stem().map_or_else(|| "region".into(), |s| s.to_string_lossy().into_owned());
    parse(&text, &region, zero_fill, &path.display().to_string())
}

/// Renders a series, optionally preceded by `# ` comment lines.
pub fn render(series: &RegionSeries, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str(&HEADER.join(","));
    out.push('\n');
    for row in series.rows() {
        let _ = writeln!(out, "{},{},{},{}", row.date, row.new_cases, row.recovered, row.deaths);
    }
    out
}

/// Renders a real-valued curve as new cases rounded to integers.
pub fn render_curve(series: &DailySeries, comments: &[String]) -> String {
    let counts: Vec<u64> = series.values().iter().map(|v| v.round().max(0.0) as u64).collect();
    let n = counts.len();
    let region = RegionSeries::new("curve", series.start_date(), counts, vec![0; n], vec![0; n])
        .expect("curve has at least one value");
    render(&region, comments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_comments_and_crlf() {
        let text = "# source: test\r\ndate,new_cases,recovered,deaths\r\n2020-04-16,5,1,0\r\n2020-04-17,7,2,1\r\n";
        let s = parse(text, "kerala", false, "t.csv").unwrap();
        assert_eq!(s.new_cases(), &[5, 7]);
        assert_eq!(s.region_id(), "kerala");
        let again = parse(&render(&s, &["x".into()]), "kerala", false, "t.csv").unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad_header = "day,new_cases,recovered,deaths\n2020-04-16,5,1,0\n";
        assert!(matches!(parse(bad_header, "r", false, "t"), Err(CliError::Data(_))));
        let thousands = "date,new_cases,recovered,deaths\n2020-04-16,1,234,1,0\n";
        assert!(parse(thousands, "r", false, "t").is_err());
        let negative = "date,new_cases,recovered,deaths\n2020-04-16,-1,0,0\n";
        let err = parse(negative, "r", false, "t.csv").unwrap_err().to_string();
        assert!(err.contains("t.csv:2"), "{err}");
        let gap = "date,new_cases,recovered,deaths\n2020-04-16,1,0,0\n2020-04-18,1,0,0\n";
        assert!(parse(gap, "r", false, "t").is_err());
        assert_eq!(parse(gap, "r", true, "t").unwrap().new_cases(), &[1, 0, 1]);
    }

    #[test]
    fn curves_round_to_counts() {
        let d = NaiveDate::from_ymd_opt(2020, 3, 15).unwrap();
        let c = DailySeries::new(d, vec![0.0, 2.4, 2.6]).unwrap();
        let s = parse(&render_curve(&c, &[]), "c", false, "t").unwrap();
        assert_eq!(s.new_cases(), &[0, 2, 3]);
    }
}
