use episense_core::regress;

use crate::cli::{self, ReportArgs};
use crate::error::{CliError, Result};
use crate::formats::{cases, sentiment as sfmt, tables};
use crate::manifest::RunManifest;

pub fn run(args: &ReportArgs, manifest: &mut RunManifest) -> Result<()> {
    if args.horizons.is_empty() || args.horizons.contains(&0) {
        return Err(CliError::config("--horizons must list positive day counts"));
    }
    let base = super::fit::fit_config(&args.model, args.horizons[0], true);
    base.validate()?;
    let series = cases::read(&args.model.cases, args.model.zero_fill)?;
    let daily = sfmt::read_daily(&args.model.sentiment)?;
    manifest.add_input(&args.model.cases)?;
    manifest.add_input(&args.model.sentiment)?;

    let report = regress::evaluate_horizons(&series, &daily, &base, &args.horizons)?;
    if let Some(note) = super::fit::non_reference_note(&report.non_reference_horizons()) {
        log::warn!("{note}");
    }
    if let Some(path) = &args.table {
        manifest.write_output(path, &tables::render_horizon_table(&report, false))?;
    }
    print!("{}", tables::render_horizon_table(&report, cli::use_color()));
    manifest.write_output(&args.out, &tables::render_horizon_csv(&report))?;
    manifest.write_beside(&args.out)?;
    Ok(())
}
