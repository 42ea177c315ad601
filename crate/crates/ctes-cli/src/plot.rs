//! Static SVG rendering of intensity curves with trial-point markers.
//!
//! Output is a single self-contained vector file: one panel per curve,
//! labeled axes, stars on verified factors, triangles on non-factors and
//! circles on scale artifacts. All coordinates are formatted with fixed
//! precision, so identical input yields identical bytes.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerKind {
    /// Verified factor.
    Star,
    /// Integer trial that is not a factor.
    Triangle,
    /// Artifact of the generalized rescaling.
    Dot,
}

#[derive(Debug, Clone, Copy)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub kind: MarkerKind,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub curve: Vec<(f64, f64)>,
    pub markers: Vec<Marker>,
}

const WIDTH: f64 = 880.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 42.0;

/// Render one SVG document with the panels stacked vertically.
/// Returns `None` when there is nothing to draw.
pub fn render(panels: &[Panel]) -> Option<String> {
    if panels.is_empty() || panels.iter().all(|p| p.curve.is_empty()) {
        return None;
    }
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (index, panel) in panels.iter().enumerate() {
        render_panel(&mut svg, panel, index as f64 * PANEL_HEIGHT);
    }
    svg.push_str("</svg>\n");
    Some(svg)
}

fn render_panel(svg: &mut String, panel: &Panel, y_offset: f64) {
    let (x_min, x_max) = bounds(panel.curve.iter().map(|&(x, _)| x));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_top = y_offset + MARGIN_TOP;
    let y_bottom = y_top + plot_h;

    // intensity axis is always [0, 1.05]
    let map_x = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min).max(f64::MIN_POSITIVE) * plot_w;
    let map_y = |y: f64| y_bottom - (y / 1.05) * plot_h;

    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="13">{}</text>"#,
        MARGIN_LEFT,
        y_top - 10.0,
        escape(&panel.title)
    )
    .unwrap();

    // frame
    writeln!(
        svg,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
        MARGIN_LEFT, y_top, plot_w, plot_h
    )
    .unwrap();

    // y ticks at 0, 0.5, 1
    for tick in [0.0f64, 0.5, 1.0] {
        let y = map_y(tick);
        writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 4.0,
            MARGIN_LEFT
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.2}" font-family="monospace" font-size="11" text-anchor="end">{tick:.1}</text>"#,
            MARGIN_LEFT - 7.0,
            y + 4.0
        )
        .unwrap();
    }

    // x ticks
    for k in 0..=5 {
        let value = x_min + (x_max - x_min) * f64::from(k) / 5.0;
        let x = map_x(value);
        writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.1}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#,
            y_bottom,
            y_bottom + 4.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="middle">{value:.4}</text>"#,
            y_bottom + 16.0
        )
        .unwrap();
    }

    // axis labels
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        y_bottom + 32.0,
        escape(&panel.x_label)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="14" y="{:.1}" font-family="monospace" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        y_top + plot_h / 2.0,
        y_top + plot_h / 2.0,
        escape(&panel.y_label)
    )
    .unwrap();

    // the curve itself
    let mut points = String::new();
    for &(x, y) in &panel.curve {
        write!(points, "{:.3},{:.3} ", map_x(x), map_y(y.clamp(0.0, 1.05))).unwrap();
    }
    writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#,
        points.trim_end()
    )
    .unwrap();

    for marker in &panel.markers {
        let x = map_x(marker.x);
        let y = map_y(marker.y.clamp(0.0, 1.05));
        match marker.kind {
            MarkerKind::Star => star(svg, x, y, 6.0, "crimson"),
            MarkerKind::Triangle => triangle(svg, x, y, 5.0, "dimgray"),
            MarkerKind::Dot => writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="darkorange" stroke-width="1.5"/>"#
            )
            .unwrap(),
        }
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn star(svg: &mut String, cx: f64, cy: f64, r: f64, color: &str) {
    let mut points = String::new();
    for k in 0..10 {
        let radius = if k % 2 == 0 { r } else { r * 0.42 };
        let angle = std::f64::consts::PI * (f64::from(k) / 5.0 - 0.5);
        write!(
            points,
            "{:.2},{:.2} ",
            cx + radius * angle.cos(),
            cy + radius * angle.sin()
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<polygon points="{}" fill="{color}"/>"#,
        points.trim_end()
    )
    .unwrap();
}

fn triangle(svg: &mut String, cx: f64, cy: f64, r: f64, color: &str) {
    writeln!(
        svg,
        r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
        cx,
        cy - r,
        cx - r,
        cy + r,
        cx + r,
        cy + r
    )
    .unwrap();
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
