//! Standalone SVG phase portraits.

use std::fmt::Write;

use planar_crn::curves::{OvalSet, Point, Window};
use planar_crn::poly::FloatPoly;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 56.0;
const MAX_POINTS: usize = 2000;
const COLOURS: &[&str] = &[
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

/// Sign field used for shading; cells where it is negative are filled.
pub struct Shading {
    pub field: FloatPoly,
    pub cells: usize,
}

pub struct Plot<'a> {
    pub window: Window,
    pub curve: &'a OvalSet,
    pub trajectories: Vec<Vec<Point>>,
    pub shading: Option<Shading>,
    pub log_axes: bool,
    pub title: Option<String>,
}

struct Axes {
    window: Window,
    log: bool,
}

impl Axes {
    fn tx(&self, v: f64) -> f64 {
        if self.log {
            v.log10()
        } else {
            v
        }
    }

    fn map(&self, (x, y): Point) -> Option<(f64, f64)> {
        if self.log && (x <= 0.0 || y <= 0.0) {
            return None;
        }
        let w = &self.window;
        let (x0, x1, y0, y1) = (self.tx(w.x0), self.tx(w.x1), self.tx(w.y0), self.tx(w.y1));
        let span = SIZE - 2.0 * MARGIN;
        let px = MARGIN + (self.tx(x) - x0) / (x1 - x0) * span;
        let py = SIZE - MARGIN - (self.tx(y) - y0) / (y1 - y0) * span;
        Some((px, py))
    }

    fn ticks(&self, lo: f64, hi: f64) -> Vec<f64> {
        if self.log {
            let (a, b) = (lo.log10().ceil() as i32, hi.log10().floor() as i32);
            return (a..=b).map(|k| 10f64.powi(k)).collect();
        }
        (0..=4).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect()
    }
}

fn polyline(out: &mut String, axes: &Axes, pts: &[Point], attrs: &str) {
    let stride = pts.len().div_ceil(MAX_POINTS).max(1);
    let mut d = String::new();
    let mut pen_down = false;
    let last = pts.len().saturating_sub(1);
    for (k, &p) in pts.iter().enumerate() {
        if k % stride != 0 && k != last {
            continue;
        }
        match axes.map(p) {
            Some((x, y)) => {
                let _ = write!(d, "{}{x:.2},{y:.2} ", if pen_down { "L" } else { "M" });
                pen_down = true;
            }
            None => pen_down = false,
        }
    }
    if !d.is_empty() {
        let _ = writeln!(out, r#"<path d="{}" fill="none" {attrs}/>"#, d.trim_end());
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn render(plot: &Plot) -> String {
    let axes = Axes {
        window: plot.window,
        log: plot.log_axes,
    };
    let w = plot.window;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let span = SIZE - 2.0 * MARGIN;
    let _ = writeln!(
        out,
        r#"<clipPath id="frame"><rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}"/></clipPath>"#
    );

    if let Some(shade) = &plot.shading {
        let _ = writeln!(
            out,
            r##"<g id="shading" clip-path="url(#frame)" fill="#ff00ff" fill-opacity="0.35" stroke="none">"##
        );
        let n = shade.cells;
        let cell = span / n as f64;
        for j in 0..n {
            for i in 0..n {
                let px = MARGIN + (i as f64 + 0.5) * cell;
                let py = SIZE - MARGIN - (j as f64 + 0.5) * cell;
                let u = |p: f64, a: f64, b: f64| {
                    let t = (p - MARGIN) / span;
                    if axes.log {
                        10f64.powf(a.log10() + t * (b.log10() - a.log10()))
                    } else {
                        a + t * (b - a)
                    }
                };
                let x = u(px, w.x0, w.x1);
                let y = u(SIZE - py, w.y0, w.y1);
                if shade.field.eval(x, y) < 0.0 {
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{:.2}" width="{cell:.2}" height="{cell:.2}"/>"#,
                        px - cell / 2.0,
                        py - cell / 2.0
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="11" fill="black">"#
    );
    for t in axes.ticks(w.x0, w.x1) {
        if let Some((px, _)) = axes.map((t, w.y0)) {
            let y = SIZE - MARGIN;
            let _ = writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{y}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                y + 5.0,
                y + 18.0,
                label(t)
            );
        }
    }
    for t in axes.ticks(w.y0, w.y1) {
        if let Some((_, py)) = axes.map((w.x0, t)) {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{py:.2}" x2="{MARGIN}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN - 5.0,
                MARGIN - 8.0,
                py + 4.0,
                label(t)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">x</text><text x="14" y="{}" text-anchor="middle">y</text>"#,
        SIZE / 2.0,
        SIZE - 14.0,
        SIZE / 2.0
    );
    if let Some(title) = &plot.title {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#,
            SIZE / 2.0,
            escape(title)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="curve" clip-path="url(#frame)">"#);
    for pts in plot.curve.ovals.iter().chain(&plot.curve.open_components) {
        polyline(
            &mut out,
            &axes,
            pts,
            r##"stroke="#0000cc" stroke-width="1.5" stroke-dasharray="6 4""##,
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="trajectories" clip-path="url(#frame)">"#);
    for (k, pts) in plot.trajectories.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        polyline(
            &mut out,
            &axes,
            pts,
            &format!(r#"stroke="{colour}" stroke-width="1""#),
        );
        if let Some((x, y)) = pts.first().and_then(|&p| axes.map(p)) {
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{colour}"/>"#
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
