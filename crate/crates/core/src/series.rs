//! Daily series transforms and divergence-point detection between two regions.

use alloc::vec::Vec;

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series is empty")]
    Empty,
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("invalid divergence config: {0}")]
    InvalidConfig(&'static str),
    #[error("series overlap {available} days, need at least {needed}")]
    InsufficientOverlap { needed: usize, available: usize },
}

/// Real-valued daily series; index `i` is `start_date + i` days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySeries {
    start_date: NaiveDate,
    values: Vec<f64>,
}

impl DailySeries {
    pub fn new(start_date: NaiveDate, values: Vec<f64>) -> Result<Self, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Self { start_date, values })
    }

    /// Builds a series from non-empty integer counts.
    ///
    /// # Panics
    /// If `counts` is empty.
    pub fn from_counts(start_date: NaiveDate, counts: &[u64]) -> Self {
        assert!(!counts.is_empty(), "count series must not be empty");
        Self {
            start_date,
            values: counts.iter().map(|&c| c as f64).collect(),
        }
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn end_date(&self) -> NaiveDate {
        self.date_at(self.values.len() - 1)
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start_date + Duration::days(index as i64)
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start_date).num_days();
        (offset >= 0 && (offset as usize) < self.values.len()).then_some(offset as usize)
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.index_of(date).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            start_date: self.start_date,
            values,
        }
    }
}

/// Running prefix sum.
pub fn cumulative(s: &DailySeries) -> DailySeries {
    let mut acc = 0.0;
    let values = s
        .values
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect();
    s.with_values(values)
}

pub fn scale(s: &DailySeries, factor: f64) -> Result<DailySeries, SeriesError> {
    if factor.is_nan() || factor <= 0.0 || factor.is_infinite() {
        return Err(SeriesError::NonPositiveFactor(factor));
    }
    Ok(s.with_values(s.values.iter().map(|v| factor * v).collect()))
}

/// Min-max normalization into `[0, 1]`; a constant series maps to zeros.
pub fn normalize_minmax(s: &DailySeries) -> DailySeries {
    s.with_values(minmax(&s.values))
}

fn minmax(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if range == 0.0 {
        return alloc::vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|v| ((v - min) / range).clamp(0.0, 1.0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceConfig {
    pub scale_a: f64,
    pub scale_b: f64,
    pub normalize: bool,
    pub window_days: usize,
    pub threshold: f64,
    pub persistence_days: usize,
}

impl Default for DivergenceConfig {
    fn default() -> Self {
        Self {
            scale_a: 1.0,
            scale_b: 1.0,
            normalize: true,
            window_days: 7,
            threshold: 0.1,
            persistence_days: 7,
        }
    }
}

impl DivergenceConfig {
    pub fn validate(&self) -> Result<(), SeriesError> {
        if !(self.scale_a > 0.0 && self.scale_a.is_finite()) {
            return Err(SeriesError::InvalidConfig("scale_a must be positive"));
        }
        if !(self.scale_b > 0.0 && self.scale_b.is_finite()) {
            return Err(SeriesError::InvalidConfig("scale_b must be positive"));
        }
        if self.window_days == 0 {
            return Err(SeriesError::InvalidConfig("window_days must be positive"));
        }
        if self.persistence_days == 0 {
            return Err(SeriesError::InvalidConfig("persistence_days must be positive"));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(SeriesError::InvalidConfig("threshold must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub divergence_date: Option<NaiveDate>,
    /// Rolling mean absolute difference; entry `i` covers the window ending
    /// at `difference_trace.date_at(i)`.
    pub difference_trace: DailySeries,
    pub config_used: DivergenceConfig,
}

/// Finds the earliest date at which the two curves stop tracking each other.
///
/// Both series are aligned on their shared dates, scaled, optionally min-max
/// normalized over the overlap, and compared through the mean absolute
/// difference over a trailing window. The divergence date is the first trace
/// date `d` such that the trace exceeds the threshold on every day of
/// `[d, d + persistence - 1]` while some earlier trace date sat at or below it.
pub fn divergence_point(
    a: &DailySeries,
    b: &DailySeries,
    cfg: &DivergenceConfig,
) -> Result<DivergenceReport, SeriesError> {
    cfg.validate()?;
    let needed = cfg.window_days + cfg.persistence_days;
    let start = a.start_date.max(b.start_date);
    let end = a.end_date().min(b.end_date());
    let available = if end < start {
        0
    } else {
        (end - start).num_days() as usize + 1
    };
    if available < needed {
        return Err(SeriesError::InsufficientOverlap { needed, available });
    }

    let (ia, ib) = (a.index_of(start).unwrap(), b.index_of(start).unwrap());
    let mut xa: Vec<f64> = a.values[ia..ia + available]
        .iter()
        .map(|v| v * cfg.scale_a)
        .collect();
    let mut xb: Vec<f64> = b.values[ib..ib + available]
        .iter()
        .map(|v| v * cfg.scale_b)
        .collect();
    if cfg.normalize {
        xa = minmax(&xa);
        xb = minmax(&xb);
    }
    let gaps: Vec<f64> = xa.iter().zip(&xb).map(|(p, q)| (p - q).abs()).collect();
    let w = cfg.window_days;
    let trace: Vec<f64> = gaps
        .windows(w)
        .map(|win| win.iter().sum::<f64>() / w as f64)
        .collect();

    let index = first_persistent_exceedance(&trace, cfg.threshold, cfg.persistence_days);
    let trace_start = start + Duration::days(w as i64 - 1);
    Ok(DivergenceReport {
        divergence_date: index.map(|i| trace_start + Duration::days(i as i64)),
        difference_trace: DailySeries {
            start_date: trace_start,
            values: trace,
        },
        config_used: *cfg,
    })
}

fn first_persistent_exceedance(trace: &[f64], threshold: f64, persistence: usize) -> Option<usize> {
    let mut seen_close = false;
    let mut run = 0usize;
    // `run` counts consecutive exceedances ending at `i`; a qualifying start
    // needs an at-or-below value before it.
    let mut run_start_qualifies = false;
    for (i, &v) in trace.iter().enumerate() {
        if v > threshold {
            if run == 0 {
                run_start_qualifies = seen_close;
            }
            run += 1;
            if run == persistence && run_start_qualifies {
                return Some(i + 1 - persistence);
            }
        } else {
            seen_close = true;
            run = 0;
        }
    }
    None
}
