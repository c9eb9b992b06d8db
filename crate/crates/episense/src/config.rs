//! Optional `key = value` config files.
//!
//! Keys are long flag names (`threshold`, `train-from`, `zero_fill`). Keys
//! before any `[section]` header apply to every subcommand that has the flag;
//! keys under `[diverge]` apply to that subcommand only. Config values are
//! injected ahead of the user's own flags, and the last occurrence of a flag
//! wins, so command-line flags take precedence over the file and the file over
//! built-in defaults.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Command};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str, source: &str) -> Result<Vec<Entry>> {
    let mut section = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |m: &str| CliError::config(format!("{source}:{}: {m}", i + 1));
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| at("unterminated section header"))?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| at("expected `key = value`"))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(at("empty key"));
        }
        let value = value.trim().trim_matches('"').to_string();
        out.push(Entry {
            section: section.clone(),
            key,
            value,
            line: i + 1,
        });
    }
    Ok(out)
}

/// Result of folding a config file into the argument list.
pub struct Injected {
    pub args: Vec<OsString>,
    pub config_keys: BTreeSet<String>,
    pub user_keys: BTreeSet<String>,
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Long flag names the user typed, for reporting where values came from.
fn user_flags(args: &[OsString]) -> BTreeSet<String> {
    args.iter()
        .filter_map(|a| {
            let s = a.to_string_lossy();
            let name = s.strip_prefix("--")?;
            Some(name.split('=').next().unwrap_or(name).to_string())
        })
        .collect()
}

pub fn inject(args: Vec<OsString>, root: &Command) -> Result<Injected> {
    let user_keys = user_flags(&args);
    let Some(path) = config_path(&args) else {
        return Ok(Injected {
            args,
            config_keys: BTreeSet::new(),
            user_keys,
        });
    };
    let Some(sub_index) = args
        .iter()
        .position(|a| root.find_subcommand(a.to_string_lossy().as_ref()).is_some())
    else {
        return Ok(Injected {
            args,
            config_keys: BTreeSet::new(),
            user_keys,
        });
    };
    let sub_name = args[sub_index].to_string_lossy().into_owned();
    let sub = root.find_subcommand(&sub_name).expect("found above");
    let source = path.display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::config(format!("{source}: {e}")))?;

    let mut extra: Vec<OsString> = Vec::new();
    let mut config_keys = BTreeSet::new();
    for e in parse(&text, &source)? {
        if e.key == "config" {
            return Err(CliError::config(format!("{source}:{}: config files cannot nest", e.line)));
        }
        let known_anywhere = root
            .get_subcommands()
            .any(|s| s.get_arguments().any(|a| a.get_long() == Some(e.key.as_str())));
        match &e.section {
            Some(s) if root.find_subcommand(s).is_none() => {
                return Err(CliError::config(format!("{source}:{}: unknown section [{s}]", e.line)));
            }
            Some(s) if *s != sub_name => continue,
            _ => {}
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())) else {
            if e.section.is_none() && known_anywhere {
                continue;
            }
            return Err(CliError::config(format!("{source}:{}: unknown key {:?}", e.line, e.key)));
        };
        let flag = OsString::from(format!("--{}", e.key));
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match e.value.as_str() {
                "true" | "yes" | "1" => extra.push(flag),
                "false" | "no" | "0" => {}
                other => {
                    return Err(CliError::config(format!(
                        "{source}:{}: {} expects true or false, got {other:?}",
                        e.line, e.key
                    )))
                }
            }
        } else {
            extra.push(flag);
            extra.push(OsString::from(&e.value));
        }
        config_keys.insert(e.key);
    }
    let mut out = args[..=sub_index].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[sub_index + 1..]);
    Ok(Injected {
        args: out,
        config_keys,
        user_keys,
    })
}
