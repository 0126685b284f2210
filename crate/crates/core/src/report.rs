//! CSV, JSON and SVG output for curves and crossings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::threshold::{CiCurve, CrossingResult, Grid};

/// `p,ci_normalized` rows with 17 significant digits.
pub fn curve_to_csv(curve: &CiCurve) -> String {
    let mut out = String::from("p,ci_normalized\n");
    for (p, v) in curve.grid.iter().zip(&curve.values) {
        writeln!(out, "{p:.16e},{v:.16e}").unwrap();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineInfo {
    pub css_reduction: bool,
    pub threads: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingInfo {
    pub p: f64,
    pub uncertainty: f64,
    pub bracket: (f64, f64),
}

impl From<CrossingResult> for CrossingInfo {
    fn from(c: CrossingResult) -> Self {
        Self {
            p: c.p_cross,
            uncertainty: c.uncertainty,
            bracket: c.bracket,
        }
    }
}

/// Summary written by `qci threshold --json`.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub code: String,
    pub k: usize,
    pub distances: Vec<usize>,
    pub noise: String,
    pub rates: Option<String>,
    pub grid: Grid,
    pub crossing: Option<CrossingInfo>,
    pub engine: EngineInfo,
    pub curves: Vec<String>,
}

impl ThresholdReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Line chart of up to a handful of curves with an optional crossing marker.
pub fn curves_to_svg(curves: &[&CiCurve], crossing: Option<&CrossingResult>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 56.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let all = || curves.iter().flat_map(|c| c.grid.iter().zip(&c.values));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (p, v) in all() {
        x0 = x0.min(*p);
        x1 = x1.max(*p);
        y0 = y0.min(*v);
        y1 = y1.max(*v);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |p: f64| PAD + (p - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<path d="M{PAD},{PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    )
    .unwrap();
    for (i, t) in [0.0, 0.5, 1.0].iter().enumerate() {
        let p = x0 + t * (x1 - x0);
        let v = y0 + t * (y1 - y0);
        let anchor = ["start", "middle", "end"][i];
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}">{p:.4}</text>"#,
            sx(p),
            H - PAD + 18.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.4}</text>"#,
            PAD - 6.0,
            sy(v) + 4.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">p</text>"#,
        W / 2.0,
        H - 12.0
    )
    .unwrap();
    writeln!(svg, r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">CI / k</text>"#, H / 2.0, H / 2.0).unwrap();

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = c
            .grid
            .iter()
            .zip(&c.values)
            .map(|(p, v)| format!("{:.2},{:.2}", sx(*p), sy(*v)))
            .collect();
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            W - PAD - 150.0,
            PAD + 16.0 * (i as f64 + 1.0),
            xml_escape(&c.label)
        )
        .unwrap();
    }
    if let Some(c) = crossing {
        writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{PAD}" x2="{x:.2}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
            H - PAD,
            x = sx(c.p_cross)
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.1}" fill="gray">p = {:.4}</text>"#,
            sx(c.p_cross) + 4.0,
            PAD - 8.0,
            c.p_cross
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
