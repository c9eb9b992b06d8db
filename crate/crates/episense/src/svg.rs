//! Minimal two-series line chart with a divergence marker.

use std::fmt::Write as _;

use episense_core::series::DailySeries;
use episense_core::NaiveDate;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 2] = ["#c0392b", "#2471a3"];

pub struct Chart<'a> {
    pub title: &'a str,
    pub y_label: &'a str,
    pub series: [(&'a str, &'a DailySeries); 2],
    pub marker: Option<NaiveDate>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render(chart: &Chart) -> String {
    let first = chart.series.iter().map(|(_, s)| s.start_date()).min().expect("two series");
    let last = chart.series.iter().map(|(_, s)| s.end_date()).max().expect("two series");
    let span = (last - first).num_days().max(1) as f64;
    let (lo, hi) = chart
        .series
        .iter()
        .flat_map(|(_, s)| s.values().iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (lo, hi) = if hi > lo { (lo.min(0.0), hi) } else { (lo - 1.0, lo + 1.0) };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |d: NaiveDate| LEFT + plot_w * (d - first).num_days() as f64 / span;
    let y = |v: f64| TOP + plot_h * (1.0 - (v - lo) / (hi - lo));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(chart.title)
    );
    // Axes.
    let _ = writeln!(
        out,
        r#"<path d="M{LEFT:.1},{TOP:.1} V{:.1} H{:.1}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"#,
            LEFT - 6.0,
            y(v) + 4.0
        );
    }
    for i in 0..=4 {
        let d = first + chrono::Duration::days((span * i as f64 / 4.0).round() as i64);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{d}</text>"#,
            x(d),
            TOP + plot_h + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">date</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(chart.y_label)
    );

    for (k, (name, s)) in chart.series.iter().enumerate() {
        let mut d = String::new();
        for (i, v) in s.values().iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.1},{:.1} ", x(s.date_at(i)), y(*v));
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            d.trim_end(),
            COLORS[k]
        );
        let ly = TOP + 14.0 * (k as f64 + 1.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{}">{}</text>"#,
            LEFT + 10.0,
            COLORS[k],
            escape(name)
        );
    }

    if let Some(m) = chart.marker {
        let mx = x(m);
        let _ = writeln!(
            out,
            r#"<line x1="{mx:.1}" y1="{TOP:.1}" x2="{mx:.1}" y2="{:.1}" stroke="gray" stroke-dasharray="4 3"/>"#,
            TOP + plot_h
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="gray">divergence {m}</text>"#,
            mx + 4.0,
            TOP + 10.0
        );
    }
    out.push_str("</svg>\n");
    out
}
