//! Horizon report as CSV and as a fixed-width text table.

use std::fmt::Write as _;

use episense_core::regress::{HorizonReport, VariantScore};

use super::{csv_writer, finish, write_record};

pub const HORIZON_HEADER: [&str; 4] = ["horizon", "variant", "rmse", "adj_r2"];
pub const WITH: &str = "with_sentiment";
pub const WITHOUT: &str = "without_sentiment";

pub fn render_horizon_csv(report: &HorizonReport) -> String {
    let mut w = csv_writer();
    write_record(&mut w, HORIZON_HEADER);
    for e in &report.entries {
        for (name, s) in [(WITH, &e.with_sentiment), (WITHOUT, &e.without_sentiment)] {
            write_record(
                &mut w,
                [e.horizon.to_string(), name.to_string(), format!("{:.6}", s.rmse), format!("{:.6}", s.adj_r2)],
            );
        }
    }
    finish(w)
}

const GREEN: &str = "\x1b[32m";
const RESET: &str = "\x1b[0m";

fn cell(s: &VariantScore, alpha: f64, better: bool, color: bool) -> String {
    let mark = if s.max_feature_p_value < alpha { "*" } else { " " };
    let rmse = format!("{:>9.2}", s.rmse);
    let rmse = if color && better { format!("{GREEN}{rmse}{RESET}") } else { rmse };
    format!("{rmse}  {:>6.2}{mark}", s.adj_r2)
}

/// Rows run from the longest horizon to the shortest. With `color`, the
/// lower RMSE of each row is highlighted.
pub fn render_horizon_table(report: &HorizonReport, color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Region {}, trained {} to {}",
        report.region, report.train_from, report.train_to
    );
    let _ = writeln!(out, "{:<16}| {:^18} | {:^18}", "Time period", "With Sentiment", "Without Sentiment");
    let _ = writeln!(out, "{:<16}| {:>9}  {:>7} | {:>9}  {:>7}", "for Prediction", "RMSE", "adjR2", "RMSE", "adjR2");
    let _ = writeln!(out, "{}+{}+{}", "-".repeat(16), "-".repeat(20), "-".repeat(20));
    for e in &report.entries {
        let (w, wo) = (&e.with_sentiment, &e.without_sentiment);
        let _ = writeln!(
            out,
            "{:<16}| {} | {}",
            format!("{} Days", e.horizon),
            cell(w, report.alpha, w.rmse < wo.rmse, color),
            cell(wo, report.alpha, wo.rmse < w.rmse, color),
        );
    }
    let _ = writeln!(
        out,
        "* every feature coefficient significant (one-tailed t-test, p < {})",
        report.alpha
    );
    let extra = report.non_reference_horizons();
    if !extra.is_empty() {
        let list: Vec<String> = extra.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "note: non-standard horizons {} (usual set is 14, 7, 3)", list.join(", "));
    }
    out
}
