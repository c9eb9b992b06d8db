use std::collections::BTreeMap;
use std::path::Path;

use episense_core::regress::{self, FitConfig, FitResult, RegressError, VariantScore, REFERENCE_HORIZONS};
use serde::{Deserialize, Serialize};

use crate::cli::{FitArgs, ModelArgs};
use crate::error::{CliError, Result};
use crate::formats::{self, cases, sentiment as sfmt};
use crate::manifest::RunManifest;

/// Contents of a fit JSON file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDocument {
    pub region: String,
    pub config: FitConfig,
    pub fit: FitResult,
    pub p_values: BTreeMap<String, f64>,
    pub significant: Vec<String>,
    /// Scores on the days after the training window, when the data reaches that far.
    pub holdout: Option<VariantScore>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn read_document(path: &Path) -> Result<FitDocument> {
    let text = formats::read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

pub(crate) fn fit_config(m: &ModelArgs, horizon: u32, with_sentiment: bool) -> FitConfig {
    FitConfig {
        train_from: m.train_from,
        train_to: m.train_to,
        horizon_days: horizon,
        with_sentiment,
        alpha: m.alpha,
        intercept: !m.no_intercept,
        cumulative_sentiment: m.cumulative_sentiment,
    }
}

pub(crate) fn non_reference_note(horizons: &[u32]) -> Option<String> {
    let odd: Vec<String> = horizons
        .iter()
        .filter(|h| !REFERENCE_HORIZONS.contains(h))
        .map(u32::to_string)
        .collect();
    (!odd.is_empty()).then(|| {
        format!(
            "non-standard horizon {} (reference horizons are 14, 7 and 3 days)",
            odd.join(", ")
        )
    })
}

pub fn run(args: &FitArgs, manifest: &mut RunManifest) -> Result<()> {
    let cfg = fit_config(&args.model, args.horizon, !args.without_sentiment);
    cfg.validate()?;
    let series = cases::read(&args.model.cases, args.model.zero_fill)?;
    let daily = sfmt::read_daily(&args.model.sentiment)?;
    manifest.add_input(&args.model.cases)?;
    manifest.add_input(&args.model.sentiment)?;

    let design = regress::build_design(&series, &daily, &cfg)?;
    let fit = regress::ols_fit(&design, cfg.intercept)?;
    let holdout = match regress::evaluate_variant(&series, &daily, &cfg) {
        Ok((_, score)) => Some(score),
        Err(RegressError::CoverageGap(day)) => {
            log::info!("no holdout score: data ends before {day}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut notes: Vec<String> = non_reference_note(&[args.horizon]).into_iter().collect();
    if fit.zero_residual_variance {
        notes.push("residuals vanish; standard errors are zero".to_string());
    }
    for n in &notes {
        log::warn!("{n}");
    }
    let doc = FitDocument {
        region: series.region_id().to_string(),
        p_values: fit.p_values(),
        significant: fit.significant(cfg.alpha).into_iter().map(str::to_string).collect(),
        config: cfg,
        fit,
        holdout,
        notes,
    };
    manifest.write_output(&args.out, &super::to_json(&doc))?;
    manifest.write_beside(&args.out)?;
    Ok(())
}
