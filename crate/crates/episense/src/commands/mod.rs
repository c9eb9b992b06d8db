//! One module per subcommand.

pub mod concepts;
pub mod diverge;
pub mod explain;
pub mod fit;
pub mod report;
pub mod sentiment;
pub mod synth;

use serde::Serialize;

/// Pretty JSON with a trailing newline.
pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}
