//! Minimal self-contained SVG 1.1 charts: scatter, line and step series on
//! linear axes, plus free-text annotations and guide lines.

use std::fmt::Write;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 260.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Scatter,
    Line,
    /// Right-continuous step function.
    Step,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub style: SeriesStyle,
    pub points: Vec<(f64, f64)>,
    /// Index into the palette; series sharing a color belong together.
    pub color: usize,
}

/// A dashed guide line at a fixed x or y, with a caption.
#[derive(Debug, Clone)]
pub enum Guide {
    Vertical { x: f64, text: String },
    Horizontal { y: f64, text: String },
}

#[derive(Debug, Clone, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub guides: Vec<Guide>,
    /// Free text listed under the legend.
    pub notes: Vec<String>,
    /// Forces the y range (ECDF plots use [0, 1]).
    pub y_range: Option<(f64, f64)>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Rounds to a 1, 2 or 5 multiple of a power of ten.
fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn bounds(chart: &Chart) -> Frame {
    let pts = chart.series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    for g in &chart.guides {
        match *g {
            Guide::Vertical { x, .. } => {
                x0 = x0.min(x);
                x1 = x1.max(x);
            }
            Guide::Horizontal { y, .. } => {
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if let Some((a, b)) = chart.y_range {
        (y0, y1) = (a, b);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    Frame { x0, x1, y0, y1 }
}

fn points_attr(frame: &Frame, pts: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.2},{:.2}", frame.px(x), frame.py(y));
    }
    s
}

fn step_points(pts: &[(f64, f64)], x_start: f64, x_end: f64, y_start: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(x_start, y_start)];
    let mut prev = y_start;
    for &(x, y) in pts {
        out.push((x, prev));
        out.push((x, y));
        prev = y;
    }
    out.push((x_end, prev));
    out
}

pub fn render(chart: &Chart) -> String {
    let f = bounds(chart);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&chart.title));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        escape(&chart.title)
    );

    let (left, right, top, bottom) = (MARGIN_L, WIDTH - MARGIN_R, MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(s, r##"<g font-family="sans-serif" font-size="11" fill="#333333">"##);
    let xs = nice_step(f.x1 - f.x0, 8.0);
    let mut t = (f.x0 / xs).ceil() * xs;
    while t <= f.x1 + 1e-9 * xs {
        let px = f.px(t);
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{top:.2}" x2="{px:.2}" y2="{bottom:.2}" stroke="#e5e5e5" stroke-width="1"/>"##);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, bottom + 16.0, fmt_tick(t));
        t += xs;
    }
    let ys = nice_step(f.y1 - f.y0, 6.0);
    let mut t = (f.y0 / ys).ceil() * ys;
    while t <= f.y1 + 1e-9 * ys {
        let py = f.py(t);
        let _ = writeln!(s, r##"<line x1="{left:.2}" y1="{py:.2}" x2="{right:.2}" y2="{py:.2}" stroke="#e5e5e5" stroke-width="1"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, py + 4.0, fmt_tick(t));
        t += ys;
    }
    let _ = writeln!(
        s,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        right - left,
        bottom - top
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#, (left + right) / 2.0, HEIGHT - 14.0, escape(&chart.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
        (top + bottom) / 2.0,
        escape(&chart.y_label)
    );
    let _ = writeln!(s, "</g>");

    for series in &chart.series {
        let color = PALETTE[series.color % PALETTE.len()];
        let pts: Vec<(f64, f64)> = series.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        match series.style {
            SeriesStyle::Scatter => {
                let _ = writeln!(s, r#"<g fill="{color}" fill-opacity="0.35" stroke="none">"#);
                for &(x, y) in &pts {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, f.px(x), f.py(y));
                }
                let _ = writeln!(s, "</g>");
            }
            SeriesStyle::Line => {
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, points_attr(&f, &pts));
            }
            SeriesStyle::Step => {
                let steps = step_points(&pts, f.x0, f.x1, f.y0.max(0.0));
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, points_attr(&f, &steps));
            }
        }
    }

    for g in &chart.guides {
        let (x1, y1, x2, y2, tx, ty, text) = match g {
            Guide::Vertical { x, text } => {
                let px = f.px(*x);
                (px, top, px, bottom, px + 4.0, top + 14.0, text)
            }
            Guide::Horizontal { y, text } => {
                let py = f.py(*y);
                (left, py, right, py, left + 6.0, py - 5.0, text)
            }
        };
        let _ = writeln!(s, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#555555" stroke-width="1" stroke-dasharray="5,4"/>"##);
        let _ = writeln!(s, r##"<text x="{tx:.2}" y="{ty:.2}" font-family="sans-serif" font-size="11" fill="#555555">{}</text>"##, escape(text));
    }

    let lx = right + 14.0;
    let mut ly = top + 10.0;
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    for series in &chart.series {
        let color = PALETTE[series.color % PALETTE.len()];
        match series.style {
            SeriesStyle::Scatter => {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" fill-opacity="0.5"/>"#, lx + 9.0, ly - 4.0);
            }
            _ => {
                let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="{color}" stroke-width="2"/>"#, ly - 4.0, lx + 18.0);
            }
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 24.0, escape(&series.label));
        ly += 18.0;
    }
    ly += 8.0;
    for note in &chart.notes {
        let _ = writeln!(s, r##"<text x="{lx:.2}" y="{ly:.2}" font-size="11" fill="#333333">{}</text>"##, escape(note));
        ly += 15.0;
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(7200.0, 8.0), 1000.0);
        assert_eq!(nice_step(1.0, 6.0), 0.2);
    }

    #[test]
    fn renders_all_styles() {
        let chart = Chart {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series { label: "a".into(), style: SeriesStyle::Scatter, points: vec![(0.0, 1.0), (1.0, 2.0)], color: 0 },
                Series { label: "b".into(), style: SeriesStyle::Line, points: vec![(0.0, 1.0), (1.0, 2.0)], color: 1 },
                Series { label: "c".into(), style: SeriesStyle::Step, points: vec![(0.5, 0.5), (1.0, 1.0)], color: 2 },
            ],
            guides: vec![Guide::Vertical { x: 0.5, text: "g".into() }],
            notes: vec!["n".into()],
            y_range: None,
        };
        let svg = render(&chart);
        assert!(svg.contains("<circle"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
