//! Tweet files: one JSON object per line with `id`, `timestamp`, `region`
//! and `text`. Timestamps are RFC 3339; extra keys are ignored.

use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use episense_core::corpus::TweetRecord;
use serde::{Deserialize, Serialize};

use super::read_text;
use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    id: String,
    timestamp: String,
    region: String,
    text: String,
}

pub fn parse(text: &str, source: &str) -> Result<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = |m: String| CliError::data(format!("{source}:{}: {m}", i + 1));
        let raw: Line = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        let timestamp = DateTime::parse_from_rfc3339(&raw.timestamp)
            .map_err(|e| at(format!("bad timestamp {:?}: {e}", raw.timestamp)))?
            .with_timezone(&Utc);
        out.push(TweetRecord {
            id: raw.id,
            timestamp,
            region_id: raw.region,
            text: raw.text,
        });
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<TweetRecord>> {
    parse(&read_text(path)?, &path.display().to_string())
}

pub fn render(tweets: &[TweetRecord]) -> String {
    let mut out = String::new();
    for t in tweets {
        let line = Line {
            id: t.id.clone(),
            timestamp: t.timestamp.to_rfc3339_opts(SecondsFormat::Secs, true),
            region: t.region_id.clone(),
            text: t.text.clone(),
        };
        out.push_str(&serde_json::to_string(&line).expect("plain strings serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_offsets_and_round_trips() {
        let text = r#"{"id":"1","timestamp":"2020-04-16T20:00:00+05:30","region":"kerala","text":"Stay home","lang":"en"}

{"id":"2","timestamp":"2020-04-16T23:59:59Z","region":"kerala","text":"masks \"now\""}
"#;
        let tweets = parse(text, "t").unwrap();
        assert_eq!(tweets.len(), 2);
        assert_eq!(tweets[0].timestamp.to_rfc3339(), "2020-04-16T14:30:00+00:00");
        assert_eq!(parse(&render(&tweets), "t").unwrap(), tweets);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "{\"id\":\"1\",\"timestamp\":\"2020-04-16T00:00:00Z\",\"region\":\"k\",\"text\":\"a\"}\n{\"id\":\"2\"}\n";
        let err = parse(text, "tw.jsonl").unwrap_err();
        assert!(err.to_string().contains("tw.jsonl:2"), "{err}");
        let bad_ts = "{\"id\":\"1\",\"timestamp\":\"yesterday\",\"region\":\"k\",\"text\":\"a\"}";
        assert!(parse(bad_ts, "t").is_err());
    }
}
