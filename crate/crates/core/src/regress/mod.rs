//! Case forecasting with multivariate OLS, with and without a sentiment
//! feature.
//!
//! Features at day `t` are cumulative new cases, cumulative recoveries and
//! (optionally) the daily sentiment value; the target is daily new cases at
//! `t + horizon`. Fits use Householder QR on unit-norm columns; coefficient
//! tests are one-tailed t-tests on the estimated sign.

mod qr;
mod tdist;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::RegionSeries;
use crate::sentiment::DailySentiment;

pub use qr::MAX_CONDITION;
pub use tdist::{t_cdf, t_sf};

pub const FEATURE_CUM_NEW: &str = "cum_new";
pub const FEATURE_CUM_RECOVERED: &str = "cum_recovered";
pub const FEATURE_SENTIMENT: &str = "sentiment";
pub const INTERCEPT: &str = "intercept";

/// Horizons reported in the reference tables, in table order.
pub const REFERENCE_HORIZONS: [u32; 3] = [14, 7, 3];

/// Relative RMSE uncertainty expected for roughly thirty training points.
pub const REFERENCE_RMSE_UNCERTAINTY: f64 = 0.129;

pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressError {
    #[error("{rows} rows, need at least {needed}")]
    TooFewRows { rows: usize, needed: usize },
    #[error("design matrix is rank deficient (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },
    #[error("no data for {0}")]
    CoverageGap(NaiveDate),
    #[error("length mismatch ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("degrees of freedom n - p - 1 must be positive (n = {n}, p = {p})")]
    DegenerateDof { n: usize, p: usize },
    #[error("row {0} has a different number of features")]
    RaggedRow(usize),
    #[error("non-finite value in row {0}")]
    NonFinite(usize),
    #[error("invalid fit config: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub train_from: NaiveDate,
    pub train_to: NaiveDate,
    pub horizon_days: u32,
    pub with_sentiment: bool,
    pub alpha: f64,
    pub intercept: bool,
    /// Use the running sum of daily sentiment instead of the daily value.
    pub cumulative_sentiment: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            train_from: NaiveDate::from_ymd_opt(2020, 4, 16).unwrap(),
            train_to: NaiveDate::from_ymd_opt(2020, 5, 14).unwrap(),
            horizon_days: 14,
            with_sentiment: true,
            alpha: DEFAULT_ALPHA,
            intercept: true,
            cumulative_sentiment: false,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), RegressError> {
        if self.train_from > self.train_to {
            return Err(RegressError::InvalidConfig("train_from is after train_to"));
        }
        if self.horizon_days == 0 {
            return Err(RegressError::InvalidConfig("horizon must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(RegressError::InvalidConfig("alpha must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn feature_names(&self) -> Vec<String> {
        let mut names = vec![FEATURE_CUM_NEW.to_string(), FEATURE_CUM_RECOVERED.to_string()];
        if self.with_sentiment {
            names.push(FEATURE_SENTIMENT.to_string());
        }
        names
    }

    /// Whether the horizon is one of the reference table horizons.
    pub fn is_reference_horizon(&self) -> bool {
        REFERENCE_HORIZONS.contains(&self.horizon_days)
    }

    fn horizon(&self) -> Duration {
        Duration::days(self.horizon_days as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub features: Vec<f64>,
    pub target: f64,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    rows: Vec<DesignRow>,
    feature_names: Vec<String>,
}

impl DesignMatrix {
    /// Requires at least `p + 2` rows for `p` features.
    pub fn new(rows: Vec<DesignRow>, feature_names: Vec<String>) -> Result<Self, RegressError> {
        let p = feature_names.len();
        for (i, r) in rows.iter().enumerate() {
            if r.features.len() != p {
                return Err(RegressError::RaggedRow(i));
            }
            if !r.target.is_finite() || r.features.iter().any(|v| !v.is_finite()) {
                return Err(RegressError::NonFinite(i));
            }
        }
        if rows.len() < p + 2 {
            return Err(RegressError::TooFewRows {
                rows: rows.len(),
                needed: p + 2,
            });
        }
        Ok(Self {
            rows,
            feature_names,
        })
    }

    pub fn rows(&self) -> &[DesignRow] {
        &self.rows
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.features[j]).collect()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.target).collect()
    }
}

/// Precomputed feature columns aligned on dates.
struct FeatureSource<'a> {
    cases: &'a RegionSeries,
    cum_new: Vec<f64>,
    cum_recovered: Vec<f64>,
    sentiment: Option<(&'a DailySentiment, Vec<f64>)>,
}

impl<'a> FeatureSource<'a> {
    fn new(cases: &'a RegionSeries, sent: &'a DailySentiment, cfg: &FitConfig) -> Self {
        let sentiment = cfg.with_sentiment.then(|| {
            let values = if cfg.cumulative_sentiment {
                prefix_sums(sent.values().iter().copied())
            } else {
                sent.values().to_vec()
            };
            (sent, values)
        });
        Self {
            cases,
            cum_new: prefix_sums(cases.new_cases().iter().map(|&c| c as f64)),
            cum_recovered: prefix_sums(cases.recovered().iter().map(|&c| c as f64)),
            sentiment,
        }
    }

    fn features(&self, t: NaiveDate) -> Result<Vec<f64>, RegressError> {
        let i = self.cases.index_of(t).ok_or(RegressError::CoverageGap(t))?;
        let mut f = vec![self.cum_new[i], self.cum_recovered[i]];
        if let Some((sent, values)) = &self.sentiment {
            let j = sent.index_of(t).ok_or(RegressError::CoverageGap(t))?;
            f.push(values[j]);
        }
        Ok(f)
    }

    fn new_cases(&self, t: NaiveDate) -> Result<f64, RegressError> {
        self.cases
            .index_of(t)
            .map(|i| self.cases.new_cases()[i] as f64)
            .ok_or(RegressError::CoverageGap(t))
    }
}

fn prefix_sums(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// One row per day `t` in `[train_from, train_to - horizon]`, so every
/// target `new_cases(t + horizon)` falls inside the training window.
pub fn build_design(
    cases: &RegionSeries,
    sent: &DailySentiment,
    cfg: &FitConfig,
) -> Result<DesignMatrix, RegressError> {
    cfg.validate()?;
    let src = FeatureSource::new(cases, sent, cfg);
    let last = cfg.train_to - cfg.horizon();
    let mut rows = Vec::new();
    let mut t = cfg.train_from;
    while t <= last {
        rows.push(DesignRow {
            features: src.features(t)?,
            target: src.new_cases(t + cfg.horizon())?,
            date: t,
        });
        t += Duration::days(1);
    }
    DesignMatrix::new(rows, cfg.feature_names())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
    /// One-tailed p-value in the direction of the estimate's sign.
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Intercept first when present, then features in design order.
    pub coefficients: Vec<Coefficient>,
    pub intercept: bool,
    pub residuals: Vec<f64>,
    pub rmse_train: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub n: usize,
    /// Number of features, not counting the intercept.
    pub p: usize,
    pub df: usize,
    pub sigma2: f64,
    /// Set when the residuals vanish and standard errors are zero.
    pub zero_residual_variance: bool,
    pub condition_estimate: f64,
    pub reference_rmse_uncertainty: f64,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn coefficient_map(&self) -> BTreeMap<String, f64> {
        self.coefficients
            .iter()
            .map(|c| (c.name.clone(), c.estimate))
            .collect()
    }

    pub fn p_values(&self) -> BTreeMap<String, f64> {
        self.coefficients
            .iter()
            .map(|c| (c.name.clone(), c.p_value))
            .collect()
    }

    /// Names of coefficients with `p < alpha`.
    pub fn significant(&self, alpha: f64) -> Vec<&str> {
        self.coefficients
            .iter()
            .filter(|c| c.p_value < alpha)
            .map(|c| c.name.as_str())
            .collect()
    }

    fn feature_coefficients(&self) -> &[Coefficient] {
        &self.coefficients[usize::from(self.intercept)..]
    }

    /// Prediction for one feature vector in design order.
    pub fn predict(&self, features: &[f64]) -> Result<f64, RegressError> {
        let betas = self.feature_coefficients();
        if features.len() != betas.len() {
            return Err(RegressError::LengthMismatch {
                left: features.len(),
                right: betas.len(),
            });
        }
        let base = if self.intercept {
            self.coefficients[0].estimate
        } else {
            0.0
        };
        Ok(base
            + betas
                .iter()
                .zip(features)
                .map(|(c, x)| c.estimate * x)
                .sum::<f64>())
    }
}

pub fn ols_fit(x: &DesignMatrix, intercept: bool) -> Result<FitResult, RegressError> {
    let n = x.n();
    let p = x.p();
    let k = p + usize::from(intercept);
    if n < p + 2 || n <= k {
        return Err(RegressError::TooFewRows {
            rows: n,
            needed: (p + 2).max(k + 1),
        });
    }
    let mut columns = Vec::with_capacity(k);
    let mut names = Vec::with_capacity(k);
    if intercept {
        columns.push(vec![1.0; n]);
        names.push(INTERCEPT.to_string());
    }
    for j in 0..p {
        columns.push(x.column(j));
        names.push(x.feature_names()[j].clone());
    }
    let y = x.targets();
    let ls = qr::least_squares(&columns, &y)
        .map_err(|s| RegressError::RankDeficient {
            condition: s.condition,
        })?;

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = columns.iter().zip(&ls.beta).map(|(c, b)| c[i] * b).sum();
            y[i] - fitted
        })
        .collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let r2 = if tss > 0.0 {
        1.0 - rss / tss
    } else if rss == 0.0 {
        1.0
    } else {
        0.0
    };
    let df = n - k;
    let sigma2 = rss / df as f64;
    let adj = adj_r2(r2, n, p)?;

    let zero_residual_variance = sigma2 == 0.0;
    let coefficients = names
        .into_iter()
        .zip(ls.beta.iter().zip(&ls.gram_inverse_diag))
        .map(|(name, (&estimate, &g))| {
            let std_error = libm::sqrt(sigma2 * g);
            let t_stat = if std_error > 0.0 {
                estimate / std_error
            } else if estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(estimate)
            };
            Coefficient {
                name,
                estimate,
                std_error,
                t_stat,
                p_value: one_tailed_p(t_stat, df),
            }
        })
        .collect();

    Ok(FitResult {
        coefficients,
        intercept,
        residuals,
        rmse_train: libm::sqrt(rss / n as f64),
        r2,
        adj_r2: adj,
        n,
        p,
        df,
        sigma2,
        zero_residual_variance,
        condition_estimate: ls.condition,
        reference_rmse_uncertainty: REFERENCE_RMSE_UNCERTAINTY,
    })
}

fn one_tailed_p(t_stat: f64, df: usize) -> f64 {
    if t_stat == 0.0 {
        return 0.5;
    }
    if t_stat.is_infinite() {
        return 0.0;
    }
    let df = u32::try_from(df).unwrap_or(u32::MAX);
    (1.0 - t_cdf(t_stat.abs(), df)).clamp(0.0, 1.0)
}

/// One-tailed p-value per coefficient (H0: beta = 0).
///
/// A coefficient with zero standard error gets `p = 0` unless the estimate is
/// itself zero, which gives `p = 0.5`; [`FitResult::zero_residual_variance`]
/// flags that situation.
pub fn coef_t_test(fit: &FitResult) -> Result<BTreeMap<String, f64>, RegressError> {
    if fit.df == 0 {
        return Err(RegressError::DegenerateDof { n: fit.n, p: fit.p });
    }
    Ok(fit
        .coefficients
        .iter()
        .map(|c| (c.name.clone(), one_tailed_p(c.t_stat, fit.df)))
        .collect())
}

pub fn rmse(pred: &[f64], actual: &[f64]) -> Result<f64, RegressError> {
    if pred.len() != actual.len() {
        return Err(RegressError::LengthMismatch {
            left: pred.len(),
            right: actual.len(),
        });
    }
    if pred.is_empty() {
        return Err(RegressError::Empty);
    }
    let sse: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a) * (p - a)).sum();
    Ok(libm::sqrt(sse / pred.len() as f64))
}

/// `1 - (1 - r2) (n - 1) / (n - p - 1)`.
pub fn adj_r2(r2: f64, n: usize, p: usize) -> Result<f64, RegressError> {
    if n <= p + 1 {
        return Err(RegressError::DegenerateDof { n, p });
    }
    Ok(1.0 - (1.0 - r2) * (n - 1) as f64 / (n - p - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantScore {
    /// Out-of-sample RMSE over the days following the training window.
    pub rmse: f64,
    pub adj_r2: f64,
    pub rmse_train: f64,
    pub r2: f64,
    /// Largest one-tailed p-value among the feature coefficients.
    pub max_feature_p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonEntry {
    pub horizon: u32,
    pub with_sentiment: VariantScore,
    pub without_sentiment: VariantScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub region: String,
    pub train_from: NaiveDate,
    pub train_to: NaiveDate,
    pub alpha: f64,
    /// Ordered by horizon, longest first.
    pub entries: Vec<HorizonEntry>,
}

impl HorizonReport {
    pub fn non_reference_horizons(&self) -> Vec<u32> {
        self.entries
            .iter()
            .map(|e| e.horizon)
            .filter(|h| !REFERENCE_HORIZONS.contains(h))
            .collect()
    }
}

/// Fits one variant and scores it on the `horizon` days after `train_to`,
/// predicting `new_cases(t + h)` from observed features at `t`.
pub fn evaluate_variant(
    cases: &RegionSeries,
    sent: &DailySentiment,
    cfg: &FitConfig,
) -> Result<(FitResult, VariantScore), RegressError> {
    let design = build_design(cases, sent, cfg)?;
    let fit = ols_fit(&design, cfg.intercept)?;
    let src = FeatureSource::new(cases, sent, cfg);
    let mut pred = Vec::with_capacity(cfg.horizon_days as usize);
    let mut actual = Vec::with_capacity(cfg.horizon_days as usize);
    for step in 1..=cfg.horizon_days as i64 {
        let target_day = cfg.train_to + Duration::days(step);
        let t = target_day - cfg.horizon();
        pred.push(fit.predict(&src.features(t)?)?);
        actual.push(src.new_cases(target_day)?);
    }
    let score = VariantScore {
        rmse: rmse(&pred, &actual)?,
        adj_r2: fit.adj_r2,
        rmse_train: fit.rmse_train,
        r2: fit.r2,
        max_feature_p_value: fit
            .feature_coefficients()
            .iter()
            .map(|c| c.p_value)
            .fold(0.0, f64::max),
    };
    Ok((fit, score))
}

/// Scores both variants at every horizon. Duplicate horizons are merged.
pub fn evaluate_horizons(
    cases: &RegionSeries,
    sent: &DailySentiment,
    base: &FitConfig,
    horizons: &[u32],
) -> Result<HorizonReport, RegressError> {
    if horizons.is_empty() {
        return Err(RegressError::Empty);
    }
    let mut hs = horizons.to_vec();
    hs.sort_unstable_by(|a, b| b.cmp(a));
    hs.dedup();
    let mut entries = Vec::with_capacity(hs.len());
    for h in hs {
        let with = FitConfig {
            horizon_days: h,
            with_sentiment: true,
            ..base.clone()
        };
        let without = FitConfig {
            with_sentiment: false,
            ..with.clone()
        };
        entries.push(HorizonEntry {
            horizon: h,
            with_sentiment: evaluate_variant(cases, sent, &with)?.1,
            without_sentiment: evaluate_variant(cases, sent, &without)?.1,
        });
    }
    Ok(HorizonReport {
        region: cases.region_id().to_string(),
        train_from: base.train_from,
        train_to: base.train_to,
        alpha: base.alpha,
        entries,
    })
}
