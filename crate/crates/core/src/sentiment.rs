//! Lexicon sentiment scoring and daily aggregation of matched tweets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concepts::{tokenize, ConceptMatch};
use crate::corpus::date_range;

pub const DEFAULT_NEGATION_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SentimentError {
    #[error("weight for {token:?} must be finite and within [-1, 1], got {weight}")]
    InvalidWeight { token: String, weight: f64 },
    #[error("negation window must be positive")]
    ZeroNegationWindow,
    #[error("no sentiment score for tweet {0:?}")]
    MissingScore(String),
    #[error("invalid date range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
    #[error("series lengths differ ({values} values, {coverage} coverage)")]
    LengthMismatch { values: usize, coverage: usize },
    #[error("daily value {0} outside [-1, 1]")]
    OutOfRange(f64),
}

/// Token weights in `[-1, 1]` plus negators that flip the sign of weighted
/// tokens following them within `negation_window` tokens.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Lexicon {
    weights: BTreeMap<String, f64>,
    negators: BTreeSet<String>,
    negation_window: usize,
}

impl Lexicon {
    pub fn new(
        weights: BTreeMap<String, f64>,
        negators: BTreeSet<String>,
        negation_window: usize,
    ) -> Result<Self, SentimentError> {
        if negation_window == 0 {
            return Err(SentimentError::ZeroNegationWindow);
        }
        if let Some((token, &weight)) = weights
            .iter()
            .find(|(_, w)| !w.is_finite() || !(-1.0..=1.0).contains(*w))
        {
            return Err(SentimentError::InvalidWeight {
                token: token.clone(),
                weight,
            });
        }
        let weights = weights
            .into_iter()
            .map(|(k, w)| (k.to_lowercase(), w))
            .collect();
        let negators = negators.into_iter().map(|k| k.to_lowercase()).collect();
        Ok(Self {
            weights,
            negators,
            negation_window,
        })
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn negators(&self) -> &BTreeSet<String> {
        &self.negators
    }

    pub fn negation_window(&self) -> usize {
        self.negation_window
    }

    /// Negators that also carry a weight. Allowed, but usually a lexicon mistake.
    pub fn weighted_negators(&self) -> Vec<&str> {
        self.negators
            .iter()
            .filter(|n| self.weights.contains_key(*n))
            .map(String::as_str)
            .collect()
    }
}

/// Mean negation-adjusted weight of the lexicon tokens in `text`, clamped to
/// `[-1, 1]`; zero when no token carries a weight.
pub fn score_tweet(lex: &Lexicon, text: &str) -> f64 {
    let tokens = tokenize(text, &BTreeSet::new());
    let mut sum = 0.0;
    let mut hits = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        let Some(&w) = lex.weights.get(token) else {
            continue;
        };
        let lo = i.saturating_sub(lex.negation_window);
        let negated = tokens[lo..i].iter().any(|t| lex.negators.contains(t));
        sum += if negated { -w } else { w };
        hits += 1;
    }
    if hits == 0 {
        return 0.0;
    }
    (sum / hits as f64).clamp(-1.0, 1.0)
}

/// Mean sentiment per day with the number of contributing matches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySentiment {
    start_date: NaiveDate,
    values: Vec<f64>,
    coverage: Vec<u64>,
}

impl DailySentiment {
    pub fn new(
        start_date: NaiveDate,
        values: Vec<f64>,
        coverage: Vec<u64>,
    ) -> Result<Self, SentimentError> {
        if values.len() != coverage.len() {
            return Err(SentimentError::LengthMismatch {
                values: values.len(),
                coverage: coverage.len(),
            });
        }
        if let Some(&v) = values
            .iter()
            .find(|v| !v.is_finite() || !(-1.0..=1.0).contains(*v))
        {
            return Err(SentimentError::OutOfRange(v));
        }
        Ok(Self {
            start_date,
            values,
            coverage,
        })
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coverage(&self) -> &[u64] {
        &self.coverage
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start_date + chrono::Duration::days(index as i64)
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start_date).num_days();
        (offset >= 0 && (offset as usize) < self.values.len()).then_some(offset as usize)
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.index_of(date).map(|i| self.values[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DailyOptions {
    /// Count each tweet once per day instead of once per matched concept.
    pub per_tweet: bool,
    /// Repeat the previous day's value on days without matches.
    pub carry_forward: bool,
}

/// Per-match mean score for each day of `[from, to]`.
pub fn daily_sentiment(
    matches: &[ConceptMatch],
    scores: &BTreeMap<String, f64>,
    from: NaiveDate,
    to: NaiveDate,
) -> Result<DailySentiment, SentimentError> {
    daily_sentiment_with(matches, scores, from, to, DailyOptions::default())
}

pub fn daily_sentiment_with(
    matches: &[ConceptMatch],
    scores: &BTreeMap<String, f64>,
    from: NaiveDate,
    to: NaiveDate,
    opts: DailyOptions,
) -> Result<DailySentiment, SentimentError> {
    if from > to {
        return Err(SentimentError::InvalidRange { from, to });
    }
    let mut per_day: BTreeMap<NaiveDate, Vec<(&str, f64)>> = BTreeMap::new();
    for m in matches {
        let score = *scores
            .get(&m.tweet_id)
            .ok_or_else(|| SentimentError::MissingScore(m.tweet_id.clone()))?;
        if m.local_date < from || m.local_date > to {
            continue;
        }
        per_day
            .entry(m.local_date)
            .or_default()
            .push((m.tweet_id.as_str(), score));
    }

    let mut values = Vec::new();
    let mut coverage = Vec::new();
    let mut last = 0.0;
    for day in date_range(from, to) {
        let mut entries = per_day.remove(&day).unwrap_or_default();
        // Summing in a canonical order keeps the result independent of the
        // order matches arrive in.
        entries.sort_by(|a, b| a.0.cmp(b.0).then(a.1.total_cmp(&b.1)));
        if opts.per_tweet {
            entries.dedup_by(|a, b| a.0 == b.0);
        }
        let n = entries.len();
        let value = if n == 0 {
            if opts.carry_forward {
                last
            } else {
                0.0
            }
        } else {
            let mut scores: Vec<f64> = entries.iter().map(|e| e.1).collect();
            scores.sort_by(f64::total_cmp);
            (scores.iter().sum::<f64>() / n as f64).clamp(-1.0, 1.0)
        };
        last = value;
        values.push(value);
        coverage.push(n as u64);
    }
    Ok(DailySentiment {
        start_date: from,
        values,
        coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex(weights: &[(&str, f64)], negators: &[&str]) -> Lexicon {
        Lexicon::new(
            weights.iter().map(|(k, w)| (k.to_string(), *w)).collect(),
            negators.iter().map(|s| s.to_string()).collect(),
            DEFAULT_NEGATION_WINDOW,
        )
        .unwrap()
    }

    fn day(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, 4, d).unwrap()
    }

    fn m(tweet: &str, concept: &str, d: u32) -> ConceptMatch {
        ConceptMatch {
            tweet_id: tweet.into(),
            concept: concept.into(),
            similarity: 0.5,
            matched_phrase: concept.into(),
            local_date: day(d),
        }
    }

    fn scores(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
        entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn score_examples() {
        let l = lex(&[("good", 1.0)], &["not"]);
        assert_eq!(score_tweet(&l, ""), 0.0);
        assert_eq!(score_tweet(&l, "good"), 1.0);
        assert_eq!(score_tweet(&l, "not good"), -1.0);
        assert_eq!(score_tweet(&l, "GOOD news"), 1.0);
    }

    #[test]
    fn negation_window_limits_reach() {
        let l = lex(&[("good", 1.0)], &["not"]);
        assert_eq!(score_tweet(&l, "not very very good"), -1.0);
        assert_eq!(score_tweet(&l, "not very very very good"), 1.0);
    }

    #[test]
    fn score_is_a_mean() {
        let l = lex(&[("good", 1.0), ("bad", -0.5), ("fear", -0.8)], &[]);
        assert!((score_tweet(&l, "good bad") - 0.25).abs() < 1e-15);
        assert!((score_tweet(&l, "bad fear fear") - (-0.7)).abs() < 1e-15);
    }

    #[test]
    fn lexicon_validation() {
        let bad: BTreeMap<String, f64> = [("x".to_string(), 1.5)].into_iter().collect();
        assert!(matches!(
            Lexicon::new(bad, BTreeSet::new(), 3),
            Err(SentimentError::InvalidWeight { .. })
        ));
        assert_eq!(
            Lexicon::new(BTreeMap::new(), BTreeSet::new(), 0),
            Err(SentimentError::ZeroNegationWindow)
        );
        let l = lex(&[("never", -0.2)], &["never", "not"]);
        assert_eq!(l.weighted_negators(), vec!["never"]);
    }

    #[test]
    fn daily_examples() {
        let empty = daily_sentiment(&[], &BTreeMap::new(), day(1), day(3)).unwrap();
        assert_eq!(empty.values(), &[0.0; 3]);
        assert_eq!(empty.coverage(), &[0; 3]);

        let s = scores(&[("a", 1.0), ("b", 0.0)]);
        let d = daily_sentiment(&[m("a", "x", 2), m("b", "y", 2)], &s, day(1), day(3)).unwrap();
        assert_eq!(d.values(), &[0.0, 0.5, 0.0]);
        assert_eq!(d.coverage(), &[0, 2, 0]);

        let s = scores(&[("t", -1.0)]);
        let d = daily_sentiment(&[m("t", "x", 1), m("t", "y", 1)], &s, day(1), day(1)).unwrap();
        assert_eq!(d.values(), &[-1.0]);
        assert_eq!(d.coverage(), &[2]);
    }

    #[test]
    fn per_tweet_collapses_multiplicity() {
        let s = scores(&[("t", -1.0), ("u", 1.0)]);
        let ms = [m("t", "x", 1), m("t", "y", 1), m("u", "x", 1)];
        let per_match = daily_sentiment(&ms, &s, day(1), day(1)).unwrap();
        assert!((per_match.values()[0] - (-1.0 / 3.0)).abs() < 1e-15);
        let opts = DailyOptions { per_tweet: true, ..Default::default() };
        let per_tweet = daily_sentiment_with(&ms, &s, day(1), day(1), opts).unwrap();
        assert_eq!(per_tweet.values(), &[0.0]);
        assert_eq!(per_tweet.coverage(), &[2]);
    }

    #[test]
    fn carry_forward_fills_silent_days() {
        let s = scores(&[("t", 0.4)]);
        let opts = DailyOptions { carry_forward: true, ..Default::default() };
        let d = daily_sentiment_with(&[m("t", "x", 2)], &s, day(1), day(4), opts).unwrap();
        assert_eq!(d.values(), &[0.0, 0.4, 0.4, 0.4]);
        assert_eq!(d.coverage(), &[0, 1, 0, 0]);
    }

    #[test]
    fn errors() {
        assert_eq!(
            daily_sentiment(&[m("t", "x", 1)], &BTreeMap::new(), day(1), day(2)),
            Err(SentimentError::MissingScore("t".into()))
        );
        assert!(matches!(
            daily_sentiment(&[], &BTreeMap::new(), day(2), day(1)),
            Err(SentimentError::InvalidRange { .. })
        ));
    }

    fn arb_matches() -> impl Strategy<Value = (Vec<ConceptMatch>, BTreeMap<String, f64>)> {
        prop::collection::vec((0usize..12, 1u32..10, 0usize..3), 0..40).prop_flat_map(|raw| {
            let n = raw.len();
            (Just(raw), prop::collection::vec(-1.0f64..=1.0, 12.max(n))).prop_map(|(raw, sc)| {
                let ms = raw
                    .iter()
                    .map(|&(t, d, c)| m(&alloc::format!("t{t}"), ["a", "b", "c"][c], d))
                    .collect();
                let scores = (0..12).map(|t| (alloc::format!("t{t}"), sc[t])).collect();
                (ms, scores)
            })
        })
    }

    proptest! {
        #[test]
        fn daily_values_bounded_and_zero_without_coverage((ms, sc) in arb_matches()) {
            let d = daily_sentiment(&ms, &sc, day(1), day(9)).unwrap();
            for (v, c) in d.values().iter().zip(d.coverage()) {
                prop_assert!((-1.0..=1.0).contains(v));
                if *c == 0 { prop_assert_eq!(*v, 0.0); }
            }
        }

        #[test]
        fn permuting_matches_is_invisible((ms, sc) in arb_matches(), seed in 0u64..1000) {
            let mut shuffled = ms.clone();
            let mut rng = crate::rng::SplitMix64::new(seed);
            for i in (1..shuffled.len()).rev() {
                let j = rng.below(i as u64 + 1) as usize;
                shuffled.swap(i, j);
            }
            prop_assert_eq!(
                daily_sentiment(&ms, &sc, day(1), day(9)).unwrap(),
                daily_sentiment(&shuffled, &sc, day(1), day(9)).unwrap()
            );
        }

        #[test]
        fn score_ignores_case(text in "[a-zA-Z ]{0,40}") {
            let l = lex(&[("good", 0.7), ("bad", -0.6), ("fear", -0.9)], &["not", "never"]);
            prop_assert_eq!(score_tweet(&l, &text), score_tweet(&l, &text.to_uppercase()));
            prop_assert_eq!(score_tweet(&l, &text), score_tweet(&l, &text.to_lowercase()));
        }

        #[test]
        fn zero_lexicon_gives_zero_daily((ms, _sc) in arb_matches(), texts in prop::collection::vec("[a-z ]{0,30}", 12)) {
            let l = lex(&[("good", 0.0), ("bad", 0.0)], &["not"]);
            let sc: BTreeMap<String, f64> = texts.iter().enumerate().map(|(i, t)| (alloc::format!("t{i}"), score_tweet(&l, t))).collect();
            let d = daily_sentiment(&ms, &sc, day(1), day(9)).unwrap();
            prop_assert!(d.values().iter().all(|&v| v == 0.0));
        }
    }
}
