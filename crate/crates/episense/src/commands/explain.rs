use std::collections::BTreeSet;

use episense_core::concepts;
use episense_core::explain::{self, CausalGraph, Explanation, GraphDocument};
use serde::Serialize;

use crate::cli::ExplainArgs;
use crate::error::{CliError, Result};
use crate::formats::{self, concepts as fmt, sentiment as sfmt};
use crate::manifest::RunManifest;

/// Default sub-event network, transcribed from a published SARS causality diagram.
pub const BUNDLED_GRAPH: &str = include_str!("../../assets/sars_subevents.json");

#[derive(Serialize)]
struct Output<'a> {
    region: &'a str,
    from: episense_core::NaiveDate,
    to: episense_core::NaiveDate,
    sentiment_coefficient: f64,
    explanations: &'a [Explanation],
}

pub fn bundled_graph() -> CausalGraph {
    let doc: GraphDocument = serde_json::from_str(BUNDLED_GRAPH).expect("bundled graph parses");
    CausalGraph::from_document(doc).expect("bundled graph is valid")
}

fn read_graph(args: &ExplainArgs, manifest: &mut RunManifest) -> Result<CausalGraph> {
    let Some(path) = &args.graph else {
        return Ok(bundled_graph());
    };
    let text = formats::read_text(path)?;
    manifest.add_input(path)?;
    let doc: GraphDocument =
        serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    CausalGraph::from_document(doc).map_err(|e| CliError::from(e).context(path.display()))
}

pub fn run(args: &ExplainArgs, manifest: &mut RunManifest) -> Result<()> {
    if args.k == 0 || args.max_depth == 0 {
        return Err(CliError::config("--k and --max-depth must be positive"));
    }
    let matches = fmt::read_matches(&args.matches)?;
    let scores = sfmt::read_scores(&args.scores)?;
    let doc = super::fit::read_document(&args.fit)?;
    for path in [&args.matches, &args.scores, &args.fit] {
        manifest.add_input(path)?;
    }
    let graph = read_graph(args, manifest)?;

    let dates = matches.iter().map(|m| m.local_date);
    let (Some(from), Some(to)) = (args.from.or_else(|| dates.clone().min()), args.to.or_else(|| dates.max()))
    else {
        return Err(CliError::data(format!("{}: no matches", args.matches.display())));
    };
    let cloud = concepts::concept_cloud(&matches, from, to)?;
    let explanations =
        explain::explain_top_concepts(&cloud, &matches, &scores, &doc.fit, &graph, args.k, args.max_depth)?;

    if let Some(path) = &args.dot {
        let mut keep: BTreeSet<String> = BTreeSet::new();
        let mut highlight = BTreeSet::new();
        for e in &explanations {
            if graph.contains(&e.concept) {
                keep.insert(e.concept.clone());
                highlight.insert(e.concept.clone());
            }
            keep.extend(e.triggers.iter().map(|t| t.node.clone()));
        }
        manifest.write_output(path, &crate::dot::render(&graph.subgraph(&keep), &highlight))?;
    }
    let beta = doc
        .fit
        .coefficient(episense_core::regress::FEATURE_SENTIMENT)
        .map(|c| c.estimate)
        .unwrap_or_default();
    let out = Output {
        region: &doc.region,
        from,
        to,
        sentiment_coefficient: beta,
        explanations: &explanations,
    };
    manifest.write_output(&args.out, &super::to_json(&out))?;
    manifest.write_beside(&args.out)?;
    Ok(())
}
