//! Causal sub-event graphs and trigger explanations for influential concepts.
//!
//! An edge `a -> b` reads "a triggers b". Cycles are allowed; traversals keep
//! a visited set instead of requiring a DAG.
//!
//! Concept influence is an attribution rule of this crate: sentiment enters the
//! regression as one aggregate feature, so a concept's share is taken as
//! `(count / total) * |beta_sentiment| * mean(|score|)` over its matches.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concepts::{ConceptCloud, ConceptMatch};
use crate::regress::{FitResult, FEATURE_SENTIMENT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExplainError {
    #[error("edge {from:?} -> {to:?} references an unknown node")]
    UnknownEndpoint { from: String, to: String },
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {from:?} -> {to:?}")]
    DuplicateEdge { from: String, to: String },
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("label for missing edge {from:?} -> {to:?}")]
    UnknownLabel { from: String, to: String },
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("fit has no sentiment coefficient")]
    NoSentimentCoefficient,
    #[error("concept cloud is empty")]
    EmptyCloud,
    #[error("no sentiment score for tweet {0:?}")]
    MissingScore(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Serialized form: `{"nodes": [...], "edges": [[from, to], ...]}` with an
/// optional `labels` list of `[from, to, label]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphDocument {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CausalGraph {
    nodes: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
    labels: BTreeMap<(String, String), String>,
    /// Reversed adjacency: consequence -> triggers.
    parents: BTreeMap<String, BTreeSet<String>>,
}

impl CausalGraph {
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Self, ExplainError>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut g = CausalGraph::default();
        for n in nodes {
            let n = n.into();
            if !g.nodes.insert(n.clone()) {
                return Err(ExplainError::DuplicateNode(n));
            }
        }
        for (from, to) in edges {
            if from == to {
                return Err(ExplainError::SelfLoop(from));
            }
            if !g.nodes.contains(&from) || !g.nodes.contains(&to) {
                return Err(ExplainError::UnknownEndpoint { from, to });
            }
            if g.edges.contains(&(from.clone(), to.clone())) {
                return Err(ExplainError::DuplicateEdge { from, to });
            }
            g.parents.entry(to.clone()).or_default().insert(from.clone());
            g.edges.insert((from, to));
        }
        Ok(g)
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self, ExplainError> {
        let edges = doc.edges.into_iter().map(|[a, b]| (a, b));
        let mut g = Self::new(doc.nodes, edges)?;
        for [from, to, label] in doc.labels {
            let key = (from, to);
            if !g.edges.contains(&key) {
                return Err(ExplainError::UnknownLabel { from: key.0, to: key.1 });
            }
            g.labels.insert(key, label);
        }
        Ok(g)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            nodes: self.nodes.iter().cloned().collect(),
            edges: self.edges.iter().map(|(a, b)| [a.clone(), b.clone()]).collect(),
            labels: self
                .labels
                .iter()
                .map(|((a, b), l)| [a.clone(), b.clone(), l.clone()])
                .collect(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, node: &str) -> bool {
        self.nodes.contains(node)
    }

    pub fn label(&self, from: &str, to: &str) -> Option<&str> {
        self.labels
            .get(&(String::from(from), String::from(to)))
            .map(String::as_str)
    }

    /// Induced subgraph on `keep`; unknown names are ignored.
    pub fn subgraph(&self, keep: &BTreeSet<String>) -> CausalGraph {
        let nodes: BTreeSet<String> = self.nodes.intersection(keep).cloned().collect();
        let mut g = CausalGraph {
            nodes,
            ..CausalGraph::default()
        };
        for (a, b) in &self.edges {
            if g.nodes.contains(a) && g.nodes.contains(b) {
                let key = (a.clone(), b.clone());
                if let Some(l) = self.labels.get(&key) {
                    g.labels.insert(key.clone(), l.clone());
                }
                g.parents.entry(b.clone()).or_default().insert(a.clone());
                g.edges.insert(key);
            }
        }
        g
    }

    fn parents_of(&self, node: &str) -> impl Iterator<Item = &String> {
        self.parents.get(node).into_iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trigger {
    pub node: String,
    pub depth: u32,
}

struct Traversal {
    triggers: Vec<Trigger>,
    /// For each trigger, the node one step closer to the query concept.
    next_hop: BTreeMap<String, String>,
}

fn traverse(g: &CausalGraph, concept: &str, max_depth: u32) -> Result<Traversal, ExplainError> {
    if !g.contains(concept) {
        return Err(ExplainError::UnknownConcept(String::from(concept)));
    }
    if max_depth == 0 {
        return Err(ExplainError::InvalidConfig("max_depth must be positive"));
    }
    let mut visited: BTreeSet<&str> = BTreeSet::new();
    visited.insert(concept);
    let mut triggers = Vec::new();
    let mut next_hop = BTreeMap::new();
    let mut frontier: Vec<&str> = alloc::vec![concept];
    for depth in 1..=max_depth {
        // Parents are discovered in sorted frontier order, so the recorded
        // hop is the smallest-named child on a shortest path.
        let mut level: BTreeMap<&str, &str> = BTreeMap::new();
        for &child in &frontier {
            for p in g.parents_of(child) {
                if !visited.contains(p.as_str()) && !level.contains_key(p.as_str()) {
                    level.insert(p.as_str(), child);
                }
            }
        }
        if level.is_empty() {
            break;
        }
        frontier = level.keys().copied().collect();
        for (&node, &hop) in &level {
            visited.insert(node);
            next_hop.insert(String::from(node), String::from(hop));
            triggers.push(Trigger {
                node: String::from(node),
                depth,
            });
        }
    }
    Ok(Traversal { triggers, next_hop })
}

/// Ancestors of `concept` up to `max_depth` steps, ordered by depth and then
/// name. The concept itself is never included.
pub fn triggers_of(g: &CausalGraph, concept: &str, max_depth: u32) -> Result<Vec<Trigger>, ExplainError> {
    traverse(g, concept, max_depth).map(|t| t.triggers)
}

/// A shortest trigger chain ending at `concept` for every trigger, in
/// trigger order.
pub fn trigger_paths(g: &CausalGraph, concept: &str, max_depth: u32) -> Result<Vec<Vec<String>>, ExplainError> {
    let t = traverse(g, concept, max_depth)?;
    Ok(t.triggers
        .iter()
        .map(|tr| {
            let mut path = alloc::vec![tr.node.clone()];
            let mut cur = &tr.node;
            while let Some(next) = t.next_hop.get(cur) {
                path.push(next.clone());
                cur = next;
            }
            if cur != concept {
                path.push(String::from(concept));
            }
            path
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub concept: String,
    pub influence_score: f64,
    pub count: u64,
    pub mean_abs_score: f64,
    pub triggers: Vec<Trigger>,
    pub paths_sampled: Vec<Vec<String>>,
}

/// Ranks cloud concepts by influence and attaches their triggers.
///
/// `scores` maps tweet ids to sentiment scores; every match inside the cloud's
/// date range must have one. Concepts absent from the graph get no triggers.
pub fn explain_top_concepts(
    cloud: &ConceptCloud,
    matches: &[ConceptMatch],
    scores: &BTreeMap<String, f64>,
    fit: &FitResult,
    graph: &CausalGraph,
    k: usize,
    max_depth: u32,
) -> Result<Vec<Explanation>, ExplainError> {
    if k == 0 {
        return Err(ExplainError::InvalidConfig("k must be positive"));
    }
    if max_depth == 0 {
        return Err(ExplainError::InvalidConfig("max_depth must be positive"));
    }
    let beta = fit
        .coefficient(FEATURE_SENTIMENT)
        .ok_or(ExplainError::NoSentimentCoefficient)?
        .estimate
        .abs();
    let total = cloud.total();
    if total == 0 {
        return Err(ExplainError::EmptyCloud);
    }

    let mut magnitudes: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for m in matches
        .iter()
        .filter(|m| m.local_date >= cloud.from && m.local_date <= cloud.to)
    {
        let s = scores
            .get(&m.tweet_id)
            .ok_or_else(|| ExplainError::MissingScore(m.tweet_id.clone()))?;
        magnitudes.entry(m.concept.as_str()).or_default().push(s.abs());
    }

    let mut ranked: Vec<(f64, f64, &str, u64)> = cloud
        .counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(name, &count)| {
            let mean = match magnitudes.get_mut(name.as_str()) {
                Some(v) if !v.is_empty() => {
                    // Sorted summation keeps the mean independent of match order.
                    v.sort_by(f64::total_cmp);
                    v.iter().sum::<f64>() / v.len() as f64
                }
                _ => 0.0,
            };
            let share = count as f64 / total as f64;
            (share * beta * mean, mean, name.as_str(), count)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.2.cmp(b.2)));

    ranked
        .into_iter()
        .take(k)
        .map(|(score, mean, name, count)| {
            let (triggers, paths_sampled) = if graph.contains(name) {
                (
                    triggers_of(graph, name, max_depth)?,
                    trigger_paths(graph, name, max_depth)?,
                )
            } else {
                (Vec::new(), Vec::new())
            };
            Ok(Explanation {
                concept: String::from(name),
                influence_score: score,
                count,
                mean_abs_score: mean,
                triggers,
                paths_sampled,
            })
        })
        .collect()
}
