//! Embedding text format: a `count dim` header, then `token v1 ... vd`.

use std::fmt::Write as _;
use std::path::Path;

use episense_core::concepts::EmbeddingStore;

use super::read_text;
use crate::error::{CliError, Result};

pub fn parse(text: &str, source: &str) -> Result<EmbeddingStore> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::data(format!("{source}: empty embedding file")))?;
    let mut parts = header.split_whitespace();
    let mut next_usize = |what: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| CliError::data(format!("{source}:1: header must be `count dim`, missing {what}")))
    };
    let count = next_usize("count")?;
    let dim = next_usize("dim")?;
    let mut store = EmbeddingStore::new(dim).map_err(|e| CliError::from(e).context(source))?;
    for (i, line) in lines {
        let at = |m: String| CliError::data(format!("{source}:{}: {m}", i + 1));
        let mut fields = line.split_whitespace();
        let token = fields.next().expect("line is not blank");
        let vector = fields
            .map(|f| f.parse::<f64>().map_err(|e| at(format!("bad value {f:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if vector.len() != dim {
            return Err(at(format!("expected {dim} values, found {}", vector.len())));
        }
        store.insert(token, vector).map_err(|e| at(e.to_string()))?;
    }
    if store.len() != count {
        return Err(CliError::data(format!(
            "{source}: header declares {count} vectors, found {}",
            store.len()
        )));
    }
    Ok(store)
}

pub fn read(path: &Path) -> Result<EmbeddingStore> {
    parse(&read_text(path)?, &path.display().to_string())
}

pub fn render(store: &EmbeddingStore) -> String {
    let mut out = format!("{} {}\n", store.len(), store.dimension());
    for (token, v) in store.iter() {
        out.push_str(token);
        for x in v {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "2 3\nmask 0.1 -0.5 1e-3\nschool 1 0 0\n";
        let store = parse(text, "e").unwrap();
        assert_eq!(store.get("mask"), Some(&[0.1, -0.5, 1e-3][..]));
        assert_eq!(parse(&render(&store), "e").unwrap(), store);
    }

    #[test]
    fn rejects_inconsistent_files() {
        assert!(parse("", "e").is_err());
        assert!(parse("1\nx 1\n", "e").is_err());
        assert!(parse("2 2\nx 1 2\n", "e").is_err());
        let err = parse("1 2\nx 1 2 3\n", "e.txt").unwrap_err().to_string();
        assert!(err.contains("e.txt:2"), "{err}");
        assert!(parse("1 2\nx 1 nan_\n", "e").is_err());
    }
}
