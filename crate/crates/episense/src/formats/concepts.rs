//! Concept lists, match tables and concept clouds.

use std::path::Path;

use episense_core::concepts::{ConceptCloud, ConceptMatch};
use episense_core::NaiveDate;

use super::{check_header, csv_reader, csv_writer, finish, parse_field, read_text, write_record};
use crate::error::{CliError, Result};

pub const MATCH_HEADER: [&str; 5] = ["tweet_id", "local_date", "concept", "similarity", "matched_phrase"];

/// `name<TAB>optional phrase override`, one per line; `#` starts a comment.
pub fn parse_concept_list(text: &str, source: &str) -> Result<Vec<(String, Option<String>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let name = parts.next().unwrap_or("").trim();
        if name.is_empty() {
            return Err(CliError::data(format!("{source}:{}: empty concept name", i + 1)));
        }
        let over = parts.next().map(str::trim).filter(|s| !s.is_empty()).map(str::to_string);
        out.push((name.to_string(), over));
    }
    Ok(out)
}

pub fn read_concept_list(path: &Path) -> Result<Vec<(String, Option<String>)>> {
    parse_concept_list(&read_text(path)?, &path.display().to_string())
}

pub fn render_concept_list(entries: &[(String, Option<String>)]) -> String {
    let mut out = String::new();
    for (name, over) in entries {
        out.push_str(name);
        if let Some(o) = over {
            out.push('\t');
            out.push_str(o);
        }
        out.push('\n');
    }
    out
}

pub fn parse_matches(text: &str, source: &str) -> Result<Vec<ConceptMatch>> {
    let mut rdr = csv_reader(text);
    check_header(&mut rdr, &MATCH_HEADER, source)?;
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| CliError::data(format!("{source}: {e}")))?;
            Ok(ConceptMatch {
                tweet_id: rec[0].to_string(),
                local_date: parse_field::<NaiveDate>(&rec, 1, "local_date", source)?,
                concept: rec[2].to_string(),
                similarity: parse_field(&rec, 3, "similarity", source)?,
                matched_phrase: rec[4].to_string(),
            })
        })
        .collect()
}

pub fn read_matches(path: &Path) -> Result<Vec<ConceptMatch>> {
    parse_matches(&read_text(path)?, &path.display().to_string())
}

pub fn render_matches(matches: &[ConceptMatch]) -> String {
    let mut w = csv_writer();
    write_record(&mut w, MATCH_HEADER);
    for m in matches {
        write_record(
            &mut w,
            [
                m.tweet_id.clone(),
                m.local_date.to_string(),
                m.concept.clone(),
                format!("{:.6}", m.similarity),
                m.matched_phrase.clone(),
            ],
        );
    }
    finish(w)
}

/// `concept,count`, most frequent first.
pub fn render_cloud(cloud: &ConceptCloud) -> String {
    let mut w = csv_writer();
    write_record(&mut w, ["concept", "count"]);
    for (name, count) in cloud.ranked() {
        write_record(&mut w, [name.to_string(), count.to_string()]);
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concept_list_with_overrides() {
        let text = "# header\nmask distribution\tmasks\nrumors\n\n  \nschool closings\t\n";
        let list = parse_concept_list(text, "c").unwrap();
        assert_eq!(
            list,
            vec![
                ("mask distribution".to_string(), Some("masks".to_string())),
                ("rumors".to_string(), None),
                ("school closings".to_string(), None),
            ]
        );
        assert_eq!(parse_concept_list(&render_concept_list(&list), "c").unwrap(), list);
        assert!(parse_concept_list("\tphrase\n", "c").is_err());
    }

    #[test]
    fn matches_round_trip_at_six_decimals() {
        let m = ConceptMatch {
            tweet_id: "t1".into(),
            concept: "travel, bans".into(),
            similarity: 0.123_456_789,
            matched_phrase: "flights".into(),
            local_date: NaiveDate::from_ymd_opt(2020, 4, 20).unwrap(),
        };
        let text = render_matches(std::slice::from_ref(&m));
        assert!(text.starts_with("tweet_id,local_date,concept,similarity,matched_phrase\n"));
        assert!(text.contains("0.123457"));
        let back = parse_matches(&text, "m").unwrap();
        assert_eq!(back[0].concept, m.concept);
        assert_eq!(back[0].similarity, 0.123457);
    }
}
