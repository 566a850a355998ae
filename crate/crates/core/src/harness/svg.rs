use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::output::{BoxStats, Summary};
use super::Method;
use crate::error::{Error, Result};

const SLOT: f64 = 90.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const PLOT_H: f64 = 300.0;
const BOX_W: f64 = 22.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn y_of(p: f64) -> f64 {
    TOP + PLOT_H * (1.0 - p.clamp(0.0, 1.0))
}

fn colour(m: Method) -> &'static str {
    match m {
        Method::Oracle => "#d62728",
        Method::Listwise => "#2ca02c",
        Method::Imputed => "#1f77b4",
    }
}

fn draw_box(out: &mut String, cx: f64, b: &BoxStats, m: Method) {
    let c = colour(m);
    let (x0, x1) = (cx - BOX_W / 2.0, cx + BOX_W / 2.0);
    let _ = writeln!(
        out,
        r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="{c}"/>"#,
        y_of(b.min),
        y_of(b.max)
    );
    for v in [b.min, b.max] {
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{c}"/>"#,
            cx - BOX_W / 4.0,
            cx + BOX_W / 4.0,
            y = y_of(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{:.2}" width="{BOX_W:.2}" height="{:.2}" fill="{c}" fill-opacity="0.35" stroke="{c}"/>"#,
        y_of(b.q3),
        (y_of(b.q1) - y_of(b.q3)).max(0.5)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="{c}" stroke-width="2"/>"#,
        y = y_of(b.median)
    );
}

/// SVG document with grouped boxplots for one missingness rate.
pub fn render_boxplot_svg(summary: &Summary, rate: f64) -> String {
    let p = summary.variables.len();
    let width = (LEFT + SLOT * p as f64 + 30.0).max(LEFT + 620.0);
    let height = TOP + PLOT_H + 90.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">Proportion missing: {rate}</text>"#,
        width / 2.0
    );

    // axes and gridlines
    let right = LEFT + SLOT * p as f64;
    for i in 0..=4 {
        let v = i as f64 * 0.25;
        let y = y_of(v);
        let _ = writeln!(out, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(out, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + PLOT_H);
    let _ = writeln!(
        out,
        r#"<text transform="translate(18,{:.1}) rotate(-90)" text-anchor="middle">Inclusion probability</text>"#,
        TOP + PLOT_H / 2.0
    );

    for (j, v) in summary.variables.iter().enumerate() {
        let slot_x = LEFT + SLOT * j as f64;
        let centre = slot_x + SLOT / 2.0;
        let label = if v.corrupted { format!("{}*", v.name) } else { v.name.clone() };
        let _ = writeln!(
            out,
            r#"<text x="{centre:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + PLOT_H + 18.0,
            escape(&label)
        );
        for (m, offset) in [(Method::Listwise, -15.0), (Method::Imputed, 15.0)] {
            if let Some(b) = summary.group(rate, m, &v.name) {
                draw_box(&mut out, centre + offset, b, m);
            }
        }
        if let Some(b) = summary.group(rate, Method::Oracle, &v.name) {
            let s = 8.0;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{s}" height="{s}" fill="{}"/>"#,
                centre - s / 2.0,
                y_of(b.median) - s / 2.0,
                colour(Method::Oracle)
            );
        }
    }

    // legend
    let ly = TOP + PLOT_H + 50.0;
    for (i, (m, label)) in [
        (Method::Listwise, "FBF after listwise deletion"),
        (Method::Imputed, "FBF with multiple imputation"),
        (Method::Oracle, "Oracle FBF (complete data)"),
    ]
    .into_iter()
    .enumerate()
    {
        let lx = LEFT + 200.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}">{label}</text>"#,
            ly - 9.0,
            colour(m),
            lx + 15.0,
            ly
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One SVG per rate in `dir`, named `boxplot_rate_<rate>.svg`.
pub fn emit_boxplot_svg(summary: &Summary, dir: &Path) -> Result<Vec<PathBuf>> {
    if summary.groups.is_empty() || summary.rates.is_empty() {
        return Err(Error::InvalidArgument("summary has no groups to plot".into()));
    }
    fs::create_dir_all(dir)?;
    summary
        .rates
        .iter()
        .map(|&rate| {
            let path = dir.join(format!("boxplot_rate_{rate}.svg"));
            fs::write(&path, render_boxplot_svg(summary, rate))?;
            Ok(path)
        })
        .collect()
}
