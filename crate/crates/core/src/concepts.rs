//! Concept matching: tokenization, phrase candidates, phrase embeddings and
//! cosine similarity against a concept vocabulary.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{TweetRecord, IST_OFFSET_MINUTES};

/// Matching threshold tuned on the original Kerala/Mumbai tweet corpus.
pub const DEFAULT_THRESHOLD: f64 = 0.45;
pub const DEFAULT_MAX_NGRAM: usize = 3;

/// Common English function words dropped before phrase extraction.
pub const ENGLISH_STOPWORDS: &[&str] = &[
    "a", "about", "after", "again", "all", "also", "am", "an", "and", "any", "are", "as", "at",
    "be", "been", "before", "being", "but", "by", "can", "could", "did", "do", "does", "doing",
    "for", "from", "had", "has", "have", "having", "he", "her", "here", "hers", "him", "his",
    "how", "i", "if", "in", "into", "is", "it", "its", "just", "me", "more", "most", "my", "no",
    "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out",
    "over", "own", "rt", "same", "she", "should", "so", "some", "such", "than", "that", "the",
    "their", "theirs", "them", "then", "there", "these", "they", "this", "those", "through",
    "to", "too", "under", "until", "up", "very", "via", "was", "we", "were", "what", "when",
    "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you", "your",
    "yours",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConceptError {
    #[error("cosine similarity undefined for a zero vector")]
    ZeroVector,
    #[error("vector dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("embedding dimension must be positive")]
    ZeroDimension,
    #[error("token {0:?} appears more than once")]
    DuplicateToken(String),
    #[error("vector for {0:?} contains a non-finite value")]
    NonFinite(String),
    #[error("concept {0:?} appears more than once")]
    DuplicateConcept(String),
    #[error("concept set is empty")]
    EmptyConceptSet,
    #[error("no in-vocabulary token in concept phrase {0:?}")]
    UnembeddableConcept(String),
    #[error("invalid matcher config: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid date range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
}

/// Token to vector table. Tokens are stored lowercased.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbeddingStore {
    dimension: usize,
    table: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dimension: usize) -> Result<Self, ConceptError> {
        if dimension == 0 {
            return Err(ConceptError::ZeroDimension);
        }
        Ok(Self {
            dimension,
            table: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, token: &str, vector: Vec<f64>) -> Result<(), ConceptError> {
        if vector.len() != self.dimension {
            return Err(ConceptError::DimensionMismatch {
                left: self.dimension,
                right: vector.len(),
            });
        }
        let key = token.to_lowercase();
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(ConceptError::NonFinite(key));
        }
        if self.table.contains_key(&key) {
            return Err(ConceptError::DuplicateToken(key));
        }
        self.table.insert(key, vector);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        match self.table.get(token) {
            Some(v) => Some(v),
            None => self.table.get(&token.to_lowercase()).map(Vec::as_slice),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.table.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub name: String,
    pub vector: Vec<f64>,
}

/// The concept vocabulary drawn from the causal sub-event network.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSet {
    concepts: Vec<Concept>,
}

impl ConceptSet {
    pub fn new(concepts: Vec<Concept>) -> Result<Self, ConceptError> {
        let first = concepts.first().ok_or(ConceptError::EmptyConceptSet)?;
        let dim = first.vector.len();
        let mut seen = BTreeSet::new();
        for c in &concepts {
            if !seen.insert(c.name.as_str()) {
                return Err(ConceptError::DuplicateConcept(c.name.clone()));
            }
            if c.vector.len() != dim {
                return Err(ConceptError::DimensionMismatch {
                    left: dim,
                    right: c.vector.len(),
                });
            }
            if c.vector.iter().any(|v| !v.is_finite()) {
                return Err(ConceptError::NonFinite(c.name.clone()));
            }
        }
        Ok(Self { concepts })
    }

    /// Embeds each `(name, phrase override)` entry with [`embed_phrase`].
    pub fn from_phrases<'a>(
        store: &EmbeddingStore,
        entries: impl IntoIterator<Item = (&'a str, Option<&'a str>)>,
    ) -> Result<Self, ConceptError> {
        let concepts = entries
            .into_iter()
            .map(|(name, phrase)| {
                let phrase = phrase.unwrap_or(name);
                embed_phrase(store, phrase)
                    .map(|vector| Concept {
                        name: name.to_string(),
                        vector,
                    })
                    .ok_or_else(|| ConceptError::UnembeddableConcept(phrase.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(concepts)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.iter()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.concepts.iter().any(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptMatch {
    pub tweet_id: String,
    pub concept: String,
    pub similarity: f64,
    pub matched_phrase: String,
    pub local_date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatcherConfig {
    /// Inclusive lower bound on cosine similarity.
    pub threshold: f64,
    pub max_ngram: usize,
    pub stopwords: BTreeSet<String>,
    /// Offset used to derive each match's local date.
    pub utc_offset_minutes: i32,
    /// Compare one mean vector of all tweet tokens instead of per-phrase vectors.
    pub whole_tweet: bool,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            max_ngram: DEFAULT_MAX_NGRAM,
            stopwords: default_stopwords(),
            utc_offset_minutes: IST_OFFSET_MINUTES,
            whole_tweet: false,
        }
    }
}

impl MatcherConfig {
    pub fn validate(&self) -> Result<(), ConceptError> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(ConceptError::InvalidConfig("threshold must lie in (0, 1]"));
        }
        if self.max_ngram == 0 {
            return Err(ConceptError::InvalidConfig("max_ngram must be positive"));
        }
        Ok(())
    }
}

pub fn default_stopwords() -> BTreeSet<String> {
    ENGLISH_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

fn is_url(word: &str) -> bool {
    let lower = word.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Lowercased word tokens.
///
/// URLs and `@mentions` are removed, `#` is stripped from hashtags, the rest
/// is split on non-alphanumeric characters. Stopwords, pure numbers and
/// tokens shorter than two characters are dropped.
pub fn tokenize(text: &str, stopwords: &BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        if is_url(word) || word.starts_with('@') {
            continue;
        }
        let lower = word.to_lowercase();
        for piece in lower.split(|c: char| !c.is_alphanumeric()) {
            if piece.chars().count() < 2
                || piece.chars().all(|c| c.is_numeric())
                || stopwords.contains(piece)
            {
                continue;
            }
            out.push(piece.to_string());
        }
    }
    out
}

/// Contiguous n-grams for `n = 1..=max_ngram`, shorter n-grams first, each
/// group left to right, first occurrence kept.
pub fn phrase_candidates(tokens: &[String], max_ngram: usize) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_ngram.min(tokens.len()) {
        for gram in tokens.windows(n) {
            let phrase = gram.join(" ");
            if seen.insert(phrase.clone()) {
                out.push(phrase);
            }
        }
    }
    out
}

/// Mean vector of the in-vocabulary tokens of a whitespace-separated phrase.
pub fn embed_phrase(store: &EmbeddingStore, phrase: &str) -> Option<Vec<f64>> {
    let mut sum = alloc::vec![0.0; store.dimension()];
    let mut hits = 0usize;
    for token in phrase.split_whitespace() {
        if let Some(v) = store.get(token) {
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            hits += 1;
        }
    }
    (hits > 0).then(|| {
        let k = hits as f64;
        sum.into_iter().map(|s| s / k).collect()
    })
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, ConceptError> {
    if u.len() != v.len() {
        return Err(ConceptError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return Err(ConceptError::ZeroVector);
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

fn norm(v: &[f64]) -> f64 {
    // Scale by the largest magnitude so the squares cannot overflow.
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * libm::sqrt(v.iter().map(|x| (x / scale) * (x / scale)).sum::<f64>())
}

/// Produces the candidate phrases of a tweet. The default is
/// [`NgramCandidates`]; a parser-backed generator can be swapped in.
pub trait CandidateGenerator {
    fn candidates(&self, text: &str, cfg: &MatcherConfig) -> Vec<String>;
}

/// Stopword-filtered n-grams up to `cfg.max_ngram`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NgramCandidates;

impl CandidateGenerator for NgramCandidates {
    fn candidates(&self, text: &str, cfg: &MatcherConfig) -> Vec<String> {
        let tokens = tokenize(text, &cfg.stopwords);
        if cfg.whole_tweet {
            return if tokens.is_empty() {
                Vec::new()
            } else {
                alloc::vec![tokens.join(" ")]
            };
        }
        phrase_candidates(&tokens, cfg.max_ngram)
    }
}

pub fn match_concepts(
    tweet: &TweetRecord,
    store: &EmbeddingStore,
    concepts: &ConceptSet,
    cfg: &MatcherConfig,
) -> Vec<ConceptMatch> {
    match_concepts_with(tweet, store, concepts, cfg, &NgramCandidates)
}

/// Emits one match per concept whose best candidate phrase reaches the
/// threshold. Ties keep the earliest candidate; output is sorted by concept.
pub fn match_concepts_with<G: CandidateGenerator + ?Sized>(
    tweet: &TweetRecord,
    store: &EmbeddingStore,
    concepts: &ConceptSet,
    cfg: &MatcherConfig,
    generator: &G,
) -> Vec<ConceptMatch> {
    let embedded: Vec<(String, Vec<f64>)> = generator
        .candidates(&tweet.text, cfg)
        .into_iter()
        .filter_map(|p| embed_phrase(store, &p).map(|v| (p, v)))
        .collect();
    if embedded.is_empty() {
        return Vec::new();
    }
    let local_date = tweet.local_date(cfg.utc_offset_minutes);
    let mut out: Vec<ConceptMatch> = concepts
        .iter()
        .filter_map(|concept| {
            let mut best: Option<(f64, &str)> = None;
            for (phrase, vector) in &embedded {
                let Ok(sim) = cosine(vector, &concept.vector) else {
                    continue;
                };
                if best.is_none_or(|(b, _)| sim > b) {
                    best = Some((sim, phrase));
                }
            }
            let (similarity, phrase) = best?;
            (similarity >= cfg.threshold).then(|| ConceptMatch {
                tweet_id: tweet.id.clone(),
                concept: concept.name.clone(),
                similarity,
                matched_phrase: phrase.to_string(),
                local_date,
            })
        })
        .collect();
    out.sort_by(|a, b| a.concept.cmp(&b.concept));
    out
}

/// Concept frequencies over an inclusive date window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptCloud {
    pub from: NaiveDate,
    pub to: NaiveDate,
    pub counts: BTreeMap<String, u64>,
}

impl ConceptCloud {
    pub fn count(&self, concept: &str) -> u64 {
        self.counts.get(concept).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Entries by count descending, then name ascending.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.counts.iter().map(|(k, &c)| (k.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

pub fn concept_cloud(
    matches: &[ConceptMatch],
    from: NaiveDate,
    to: NaiveDate,
) -> Result<ConceptCloud, ConceptError> {
    if from > to {
        return Err(ConceptError::InvalidRange { from, to });
    }
    let mut counts = BTreeMap::new();
    for m in matches.iter().filter(|m| m.local_date >= from && m.local_date <= to) {
        *counts.entry(m.concept.clone()).or_insert(0) += 1;
    }
    Ok(ConceptCloud { from, to, counts })
}
