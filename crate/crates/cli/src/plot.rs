//! Minimal self-contained SVG line plots.

use std::fmt::Write;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#17becf",
];

fn axis_value(v: f64, log: bool) -> f64 {
    if log {
        v.log10()
    } else {
        v
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let d = lo.abs().max(1.0) * 0.5;
        (lo - d, hi + d)
    }
}

fn tick_label(v: f64, log: bool) -> String {
    let x = if log { 10f64.powf(v) } else { v };
    format!("{x:.3e}")
}

/// Renders `plot`; every series needs at least two points, and log axes
/// need positive values.
pub fn emit_plot(plot: &Plot) -> CliResult<String> {
    if plot.series.is_empty() {
        return Err(CliError::Usage("plot has no series".into()));
    }
    for s in &plot.series {
        if s.points.len() < 2 {
            return Err(CliError::Usage(format!(
                "series '{}' needs at least 2 points, has {}",
                s.name,
                s.points.len()
            )));
        }
        for (row, &(x, y)) in s.points.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                return Err(CliError::Usage(format!(
                    "series '{}' row {row}: non-finite value",
                    s.name
                )));
            }
            if (plot.log_x && x <= 0.0) || (plot.log_y && y <= 0.0) {
                return Err(CliError::Usage(format!(
                    "series '{}' row {row}: ({x}, {y}) cannot be drawn on a log axis",
                    s.name
                )));
            }
        }
    }
    let all = || plot.series.iter().flat_map(|s| s.points.iter());
    let xs = all().map(|p| axis_value(p.0, plot.log_x));
    let (x0, x1) = padded(
        xs.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
    );
    let ys = all().map(|p| axis_value(p.1, plot.log_y));
    let (y0, y1) = padded(
        ys.clone().fold(f64::INFINITY, f64::min),
        ys.fold(f64::NEG_INFINITY, f64::max),
    );
    let px =
        |x: f64| MARGIN + (axis_value(x, plot.log_x) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| {
        HEIGHT - MARGIN - (axis_value(y, plot.log_y) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN)
    };

    let mut svg = String::new();
    let w = &mut svg;
    // writing to a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&plot.title)
    );
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        w,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (gx, gy) = (l + f * (r - l), b - f * (b - t));
        let _ = writeln!(
            w,
            r#"<text x="{gx:.1}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            b + 15.0,
            tick_label(x0 + f * (x1 - x0), plot.log_x)
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{gy:.1}" text-anchor="end" font-size="10">{}</text>"#,
            l - 4.0,
            tick_label(y0 + f * (y1 - y0), plot.log_y)
        );
    }
    let scale = |log: bool| if log { " (log)" } else { "" };
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle">{}{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(&plot.x_label),
        scale(plot.log_x)
    );
    let _ = writeln!(
        w,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&plot.y_label),
        scale(plot.log_y)
    );
    for (i, s) in plot.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if i % 2 == 1 {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            pts.join(" ")
        );
        let ly = t + 16.0 * i as f64;
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#,
            r - 150.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
