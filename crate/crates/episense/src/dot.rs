//! Graphviz text for trigger subgraphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use episense_core::explain::CausalGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Nodes in `highlight` are drawn filled.
pub fn render(g: &CausalGraph, highlight: &BTreeSet<String>) -> String {
    let mut out = String::from("digraph triggers {\n  rankdir=LR;\n  node [shape=box];\n");
    for n in g.nodes() {
        if highlight.contains(n) {
            let _ = writeln!(out, "  {} [style=filled, fillcolor=\"#f5cba7\"];", quote(n));
        } else {
            let _ = writeln!(out, "  {};", quote(n));
        }
    }
    for (a, b) in g.edges() {
        match g.label(a, b) {
            Some(l) => {
                let _ = writeln!(out, "  {} -> {} [label={}];", quote(a), quote(b), quote(l));
            }
            None => {
                let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
            }
        }
    }
    out.push_str("}\n");
    out
}
