//! Lexicon TSV: `token<TAB>weight` lines and `!token` negator lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use episense_core::sentiment::Lexicon;

use super::read_text;
use crate::error::{CliError, Result};

pub fn parse(text: &str, negation_window: usize, source: &str) -> Result<Lexicon> {
    let mut weights = BTreeMap::new();
    let mut negators = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |m: String| CliError::data(format!("{source}:{}: {m}", i + 1));
        if let Some(neg) = line.strip_prefix('!') {
            negators.insert(neg.trim().to_lowercase());
            continue;
        }
        let (token, weight) = line
            .split_once('\t')
            .ok_or_else(|| at("expected `token<TAB>weight`".into()))?;
        let weight: f64 = weight
            .trim()
            .parse()
            .map_err(|e| at(format!("bad weight {weight:?}: {e}")))?;
        weights.insert(token.trim().to_string(), weight);
    }
    Lexicon::new(weights, negators, negation_window).map_err(|e| CliError::from(e).context(source))
}

pub fn read(path: &Path, negation_window: usize) -> Result<Lexicon> {
    parse(&read_text(path)?, negation_window, &path.display().to_string())
}

pub fn render(lex: &Lexicon) -> String {
    let mut out = String::new();
    for (token, w) in lex.weights() {
        let _ = writeln!(out, "{token}\t{w}");
    }
    for n in lex.negators() {
        let _ = writeln!(out, "!{n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weights_and_negators() {
        let lex = parse("# comment\nGood\t0.8\nbad\t-0.7\n!Not\n", 3, "l").unwrap();
        assert_eq!(lex.weights().get("good"), Some(&0.8));
        assert!(lex.negators().contains("not"));
        assert_eq!(parse(&render(&lex), 3, "l").unwrap(), lex);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse("good 0.8\n", 3, "l").is_err());
        assert!(parse("good\tlots\n", 3, "l").is_err());
        assert!(matches!(parse("good\t1.5\n", 3, "l"), Err(CliError::Data(_))));
        assert!(matches!(parse("good\t0.5\n", 0, "l"), Err(CliError::Config(_))));
    }
}
