//! Seeded synthetic data: case curves driven by a sentiment signal, paired
//! curves with a known divergence day, and a toy tweet corpus.
//!
//! All randomness comes from [`SplitMix64`]. Normal draws use Box-Muller
//! through `libm`, which is a pure software implementation, so outputs are
//! bit-identical across platforms.
//!
//! Case recurrence, with `C` and `R` the cumulative new and recovered counts
//! (zero before the first day) and `L = lag`:
//!
//! ```text
//! new(t)       = max(0, round(base + noise_sd * z(t)))                                   t < L
//! new(t)       = max(0, round(base + beta_cases * C(t - L) + beta_recovered * R(t - L)
//!                             + beta_sentiment * sentiment_scale * s(t - L) + noise_sd * z(t)))  t >= L
//! recovered(t) = new(t - recovery_days), zero before that
//! deaths(t)    = 0
//! ```
//!
//! Draw order per day: the sentiment value, the coverage count, then `z(t)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::{Duration, NaiveDate, NaiveTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concepts::EmbeddingStore;
use crate::corpus::{RegionSeries, TweetRecord};
use crate::rng::SplitMix64;
use crate::sentiment::{DailySentiment, Lexicon, DEFAULT_NEGATION_WINDOW};
use crate::series::DailySeries;

/// Shortest accepted series: a 30-day training window, a 14-day horizon and
/// one extra day.
pub const MIN_DAYS: usize = 45;

/// Height of the shared hump in [`generate_divergence_pair`].
pub const PAIR_AMPLITUDE: f64 = 100.0;
/// Default rise of series A after the split, as a fraction of the amplitude.
pub const PAIR_RAMP_FRACTION: f64 = 0.6;
/// Days the ramp takes to reach its full height.
pub const PAIR_RAMP_DAYS: usize = 10;
const PAIR_NOISE_SD: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn invalid(msg: &str) -> SynthError {
    SynthError::InvalidConfig(msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentProcess {
    /// Independent uniform draws on `[-1, 1]`.
    IidUniform,
    /// Gaussian steps of size `walk_step`, reflected back into `[-1, 1]`.
    RandomWalk,
}

impl SentimentProcess {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentProcess::IidUniform => "iid_uniform",
            SentimentProcess::RandomWalk => "random_walk",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "iid_uniform" => Some(SentimentProcess::IidUniform),
            "random_walk" => Some(SentimentProcess::RandomWalk),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub days: usize,
    pub start: NaiveDate,
    pub beta_cases: f64,
    pub beta_recovered: f64,
    pub beta_sentiment: f64,
    pub noise_sd: f64,
    pub sentiment_process: SentimentProcess,
    /// Days between the features and the new cases they drive.
    pub lag: u32,
    pub base: f64,
    /// Multiplier turning a sentiment value into case counts.
    pub sentiment_scale: f64,
    pub recovery_days: u32,
    pub walk_step: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            days: 90,
            start: NaiveDate::from_ymd_opt(2020, 3, 15).unwrap(),
            beta_cases: 0.08,
            beta_recovered: -0.08,
            beta_sentiment: 1.0,
            noise_sd: 2.0,
            sentiment_process: SentimentProcess::IidUniform,
            lag: 7,
            base: 20.0,
            sentiment_scale: 20.0,
            recovery_days: 10,
            walk_step: 0.15,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.days < MIN_DAYS {
            return Err(SynthError::InvalidConfig(format!("days must be at least {MIN_DAYS}")));
        }
        let reals = [
            self.beta_cases,
            self.beta_recovered,
            self.beta_sentiment,
            self.noise_sd,
            self.base,
            self.sentiment_scale,
            self.walk_step,
        ];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(invalid("parameters must be finite"));
        }
        if self.noise_sd < 0.0 {
            return Err(invalid("noise_sd must be non-negative"));
        }
        if self.walk_step < 0.0 {
            return Err(invalid("walk_step must be non-negative"));
        }
        if self.lag == 0 {
            return Err(invalid("lag must be positive"));
        }
        if self.start.checked_add_signed(Duration::days(self.days as i64)).is_none() {
            return Err(invalid("date range overflows"));
        }
        Ok(())
    }
}

fn reflect_unit(mut s: f64) -> f64 {
    // Large steps can overshoot twice; the clamp covers any remainder.
    for _ in 0..2 {
        if s > 1.0 {
            s = 2.0 - s;
        } else if s < -1.0 {
            s = -2.0 - s;
        }
    }
    s.clamp(-1.0, 1.0)
}

/// Case counts and the sentiment signal that drives them.
pub fn generate(cfg: &SynthConfig) -> Result<(RegionSeries, DailySentiment), SynthError> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.seed);
    let n = cfg.days;
    let lag = cfg.lag as usize;
    let rd = cfg.recovery_days as usize;

    let mut sentiment = Vec::with_capacity(n);
    let mut coverage = Vec::with_capacity(n);
    let mut new = Vec::with_capacity(n);
    let mut recovered = Vec::with_capacity(n);
    // cum_new[t] and cum_rec[t] include day t.
    let mut cum_new: Vec<f64> = Vec::with_capacity(n);
    let mut cum_rec: Vec<f64> = Vec::with_capacity(n);

    for t in 0..n {
        let s = match cfg.sentiment_process {
            SentimentProcess::IidUniform => rng.uniform(-1.0, 1.0),
            SentimentProcess::RandomWalk => match sentiment.last() {
                None => rng.uniform(-0.5, 0.5),
                Some(&prev) => reflect_unit(prev + cfg.walk_step * rng.normal()),
            },
        };
        sentiment.push(s);
        coverage.push(20 + rng.below(31));
        let z = rng.normal();

        let mut level = cfg.base + cfg.noise_sd * z;
        if t >= lag {
            let u = t - lag;
            level += cfg.beta_cases * cum_new[u]
                + cfg.beta_recovered * cum_rec[u]
                + cfg.beta_sentiment * cfg.sentiment_scale * sentiment[u];
        }
        let count = libm::round(level).max(0.0);
        if !count.is_finite() || count > u64::MAX as f64 {
            return Err(invalid("case counts overflow"));
        }
        let count = count as u64;
        new.push(count);
        let rec = if t >= rd { new[t - rd] } else { 0 };
        recovered.push(rec);
        cum_new.push(cum_new.last().copied().unwrap_or(0.0) + count as f64);
        cum_rec.push(cum_rec.last().copied().unwrap_or(0.0) + rec as f64);
    }

    let cases = RegionSeries::new("synthetic", cfg.start, new, recovered, alloc::vec![0; n])
        .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
    let sent = DailySentiment::new(cfg.start, sentiment, coverage)
        .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
    Ok((cases, sent))
}

/// First day of the series produced by [`generate_divergence_pair`].
pub fn pair_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 3, 15).unwrap()
}

/// Two curves sharing one noisy hump; A additionally ramps up after
/// `split_day` by `PAIR_RAMP_FRACTION * PAIR_AMPLITUDE`. Returns `(A, B)`.
pub fn generate_divergence_pair(seed: u64, split_day: usize, days: usize) -> Result<(DailySeries, DailySeries), SynthError> {
    generate_divergence_pair_with(seed, split_day, days, PAIR_RAMP_FRACTION * PAIR_AMPLITUDE)
}

/// As [`generate_divergence_pair`] with an explicit ramp height; a height of
/// zero yields identical series.
///
/// The shared hump peaks at `split_day / 2` and starts from exactly zero, so
/// both curves have the same minimum. A stays below the hump's peak after the
/// split for the default ramp, which keeps min-max normalization identical
/// for the two curves before the split.
pub fn generate_divergence_pair_with(
    seed: u64,
    split_day: usize,
    days: usize,
    ramp: f64,
) -> Result<(DailySeries, DailySeries), SynthError> {
    if split_day == 0 || split_day >= days {
        return Err(invalid("split_day must satisfy 0 < split_day < days"));
    }
    if !ramp.is_finite() || ramp < 0.0 {
        return Err(invalid("ramp must be finite and non-negative"));
    }
    let mut rng = SplitMix64::new(seed);
    let peak = split_day as f64 / 2.0;
    let width = (split_day as f64 / 6.0).max(1.0);
    let mut a = Vec::with_capacity(days);
    let mut b = Vec::with_capacity(days);
    for t in 0..days {
        let z = rng.normal();
        let base = if t == 0 {
            0.0
        } else {
            let x = (t as f64 - peak) / width;
            (PAIR_AMPLITUDE * libm::exp(-0.5 * x * x) + PAIR_NOISE_SD * z).max(0.0)
        };
        let rise = if t >= split_day {
            let k = (t - split_day + 1) as f64 / PAIR_RAMP_DAYS as f64;
            ramp * k.min(1.0)
        } else {
            0.0
        };
        a.push(base + rise);
        b.push(base);
    }
    let start = pair_start();
    let to_series = |v| DailySeries::new(start, v).map_err(|e| SynthError::InvalidConfig(e.to_string()));
    Ok((to_series(a)?, to_series(b)?))
}

/// Inputs for a full toy pipeline run: tweets, embeddings, concepts with
/// optional phrase overrides, and a sentiment lexicon.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyCorpus {
    pub tweets: Vec<TweetRecord>,
    pub embeddings: EmbeddingStore,
    pub concepts: Vec<(String, Option<String>)>,
    pub lexicon: Lexicon,
}

pub const TOY_DIMENSION: usize = 16;
pub const TOY_UTC_OFFSET_MINUTES: i32 = 330;

/// (concept, phrase override, surface words). Every word embeds close to its
/// concept's direction.
const TOY_CONCEPTS: [(&str, Option<&str>, [&str; 4]); 8] = [
    ("quarantine", None, ["quarantine", "lockdown", "isolation", "curfew"]),
    ("panic reaction", Some("panic"), ["panic", "hoarding", "scared", "stockpiling"]),
    ("school closings", Some("schools"), ["schools", "classes", "exams", "students"]),
    ("unemployment", None, ["unemployment", "jobs", "layoffs", "salary"]),
    ("rumors", None, ["rumors", "hoax", "fake", "forwarded"]),
    ("business closings", Some("shops"), ["shops", "stores", "restaurants", "malls"]),
    ("mask distribution", Some("masks"), ["masks", "sanitizer", "ppe", "gloves"]),
    ("travel bans", Some("flights"), ["flights", "travel", "borders", "airports"]),
];
/// Relative frequency of each concept in the toy tweets.
const TOY_WEIGHTS: [u64; 8] = [8, 6, 5, 4, 3, 2, 2, 1];
const POSITIVE: [(&str, f64); 5] = [("good", 0.8), ("hope", 0.6), ("safe", 0.7), ("relief", 0.8), ("thankful", 0.9)];
const NEGATIVE: [(&str, f64); 5] = [("bad", -0.8), ("terrible", -0.9), ("fear", -0.7), ("awful", -0.9), ("worse", -0.6)];
const NEGATORS: [&str; 2] = ["not", "never"];
const FILLER: [&str; 6] = ["today", "city", "people", "news", "again", "update"];

fn random_unit(rng: &mut SplitMix64, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    v.into_iter().map(|x| x / norm).collect()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn orthogonal_to(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Vec<f64> {
    for b in basis {
        let d = dot(&v, b);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    v
}

/// Gram-Schmidt; assumes the vectors are independent.
fn orthonormal(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let w = orthogonal_to(v.clone(), &basis);
        let norm = libm::sqrt(dot(&w, &w));
        basis.push(w.into_iter().map(|x| x / norm).collect());
    }
    basis
}

fn pick<'a>(rng: &mut SplitMix64, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len() as u64) as usize]
}

/// Tweets whose lexicon sentiment follows `sentiment`: on a day with value
/// `s` a tweet is positive with probability `(1 + s) / 2`. Uses its own
/// generator stream derived from `seed`.
pub fn toy_corpus(seed: u64, sentiment: &DailySentiment, tweets_per_day: (u64, u64)) -> Result<ToyCorpus, SynthError> {
    let (lo, hi) = tweets_per_day;
    if lo == 0 || hi < lo {
        return Err(invalid("tweets_per_day must satisfy 0 < lo <= hi"));
    }
    let mut rng = SplitMix64::new(seed ^ 0x746F_795F_636F_7270);

    let mut embeddings = EmbeddingStore::new(TOY_DIMENSION).map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
    let insert = |store: &mut EmbeddingStore, word: &str, v: Vec<f64>| {
        store.insert(word, v).map_err(|e| SynthError::InvalidConfig(e.to_string()))
    };
    let raw: Vec<Vec<f64>> = TOY_CONCEPTS.iter().map(|_| random_unit(&mut rng, TOY_DIMENSION)).collect();
    let basis = orthonormal(&raw);
    for ((_, _, words), dir) in TOY_CONCEPTS.iter().zip(&basis) {
        for w in words {
            let jitter = random_unit(&mut rng, TOY_DIMENSION);
            let v = dir.iter().zip(&jitter).map(|(d, j)| d + 0.3 * j).collect();
            insert(&mut embeddings, w, v)?;
        }
    }
    for w in POSITIVE.iter().chain(&NEGATIVE).map(|p| p.0).chain(FILLER) {
        // Orthogonal to every concept direction, so only concept words match.
        let v = orthogonal_to(random_unit(&mut rng, TOY_DIMENSION), &basis);
        insert(&mut embeddings, w, v)?;
    }

    let concepts = TOY_CONCEPTS
        .iter()
        .map(|(name, over, _)| (name.to_string(), over.map(str::to_string)))
        .collect();
    let weights: BTreeMap<String, f64> = POSITIVE.iter().chain(&NEGATIVE).map(|(w, s)| (w.to_string(), *s)).collect();
    let lexicon = Lexicon::new(weights, NEGATORS.iter().map(|s| s.to_string()).collect(), DEFAULT_NEGATION_WINDOW)
        .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;

    let weight_total: u64 = TOY_WEIGHTS.iter().sum();
    let positive: Vec<&str> = POSITIVE.iter().map(|p| p.0).collect();
    let negative: Vec<&str> = NEGATIVE.iter().map(|p| p.0).collect();
    let mut tweets = Vec::new();
    for (day_index, &s) in sentiment.values().iter().enumerate() {
        let date = sentiment.date_at(day_index);
        let count = lo + rng.below(hi - lo + 1);
        for k in 0..count {
            let mut roll = rng.below(weight_total);
            let concept = TOY_WEIGHTS
                .iter()
                .position(|&w| {
                    let hit = roll < w;
                    roll = roll.saturating_sub(w);
                    hit
                })
                .unwrap_or(0);
            let words = &TOY_CONCEPTS[concept].2;
            let want_positive = rng.next_f64() < (1.0 + s) / 2.0;
            let negate = rng.below(100) < 15;
            let pool = if want_positive != negate { &positive } else { &negative };
            let mut parts: Vec<String> = Vec::new();
            parts.push(pick(&mut rng, words).to_string());
            if rng.below(2) == 0 {
                parts.push(pick(&mut rng, words).to_string());
            }
            if negate {
                parts.push(pick(&mut rng, &NEGATORS).to_string());
            }
            parts.push(pick(&mut rng, pool).to_string());
            parts.push(pick(&mut rng, &FILLER).to_string());
            match rng.below(10) {
                0 => parts.push("https://t.co/x".to_string()),
                1 => parts.insert(0, "@user".to_string()),
                2 => parts.push(format!("#{}", pick(&mut rng, &FILLER))),
                _ => {}
            }
            // 03:00-12:59 UTC stays on the same calendar day at UTC+05:30.
            let minutes = 180 + rng.below(600) as i64;
            let naive = date.and_time(NaiveTime::MIN) + Duration::minutes(minutes);
            tweets.push(TweetRecord {
                id: format!("t{day_index:04}{k:02}"),
                timestamp: Utc.from_utc_datetime(&naive),
                region_id: "synthetic".to_string(),
                text: parts.join(" "),
            });
        }
    }
    Ok(ToyCorpus {
        tweets,
        embeddings,
        concepts,
        lexicon,
    })
}
