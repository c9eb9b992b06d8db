use std::path::Path;

use episense_core::series::{self, DailySeries, DivergenceConfig, DivergenceReport};
use serde::Serialize;

use crate::cli::DivergeArgs;
use crate::error::{CliError, Result};
use crate::formats::cases;
use crate::manifest::RunManifest;
use crate::svg::{self, Chart};

#[derive(Serialize)]
struct Output<'a> {
    region_a: &'a str,
    region_b: &'a str,
    #[serde(flatten)]
    report: &'a DivergenceReport,
}

fn crop(s: &DailySeries, args: &DivergeArgs, path: &Path) -> Result<DailySeries> {
    let from = args.from.unwrap_or(s.start_date()).max(s.start_date());
    let to = args.to.unwrap_or(s.end_date()).min(s.end_date());
    if from > to {
        return Err(CliError::data(format!("{}: no days between --from and --to", path.display())));
    }
    let (i, j) = (s.index_of(from).unwrap(), s.index_of(to).unwrap());
    Ok(DailySeries::new(from, s.values()[i..=j].to_vec())?)
}

pub fn run(args: &DivergeArgs, manifest: &mut RunManifest) -> Result<()> {
    let cfg = DivergenceConfig {
        scale_a: args.scale_a,
        scale_b: args.scale_b,
        normalize: !args.no_normalize,
        window_days: args.window,
        threshold: args.threshold,
        persistence_days: args.persistence,
    };
    cfg.validate()?;
    if let (Some(from), Some(to)) = (args.from, args.to) {
        if from > to {
            return Err(CliError::config(format!("--from {from} is after --to {to}")));
        }
    }
    let a = cases::read(&args.a, args.zero_fill)?;
    let b = cases::read(&args.b, args.zero_fill)?;
    manifest.add_input(&args.a)?;
    manifest.add_input(&args.b)?;

    let (sa, sb) = (
        crop(&a.new_cases_series(), args, &args.a)?,
        crop(&b.new_cases_series(), args, &args.b)?,
    );
    let report = series::divergence_point(&sa, &sb, &cfg)?;
    match report.divergence_date {
        Some(d) => log::info!("{} and {} diverge on {d}", a.region_id(), b.region_id()),
        None => log::info!("{} and {} never diverge", a.region_id(), b.region_id()),
    }
    let json = super::to_json(&Output {
        region_a: a.region_id(),
        region_b: b.region_id(),
        report: &report,
    });

    if let Some(path) = &args.svg {
        let prepare = |s, factor| -> Result<_> {
            let scaled = series::scale(s, factor)?;
            Ok(if cfg.normalize {
                series::normalize_minmax(&scaled)
            } else {
                scaled
            })
        };
        let (pa, pb) = (prepare(&sa, cfg.scale_a)?, prepare(&sb, cfg.scale_b)?);
        let title = format!("New cases: {} vs {}", a.region_id(), b.region_id());
        let chart = Chart {
            title: &title,
            y_label: if cfg.normalize { "normalized new cases" } else { "new cases" },
            series: [(a.region_id(), &pa), (b.region_id(), &pb)],
            marker: report.divergence_date,
        };
        manifest.write_output(path, &svg::render(&chart))?;
    }

    match &args.out {
        Some(path) => {
            manifest.write_output(path, &json)?;
            manifest.write_beside(path)?;
        }
        None => {
            print!("{json}");
            if let Some(path) = &args.svg {
                manifest.write_beside(path)?;
            }
        }
    }
    Ok(())
}
