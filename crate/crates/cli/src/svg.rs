//! Minimal deterministic SVG writer for flat-torus portraits and parameter
//! plane diagrams. All coordinates are printed with a fixed number of
//! decimals so identical scenes give identical bytes.

use std::fmt::Write;

/// Axis-aligned filled rectangle in data coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub fill: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub points: Vec<(f64, f64)>,
    pub stroke: String,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerShape {
    Circle,
    Cross,
    Diamond,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub shape: MarkerShape,
    pub color: String,
}

/// A portrait. Layers are drawn in field order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Tick positions with their labels.
    pub x_ticks: Vec<(f64, String)>,
    pub y_ticks: Vec<(f64, String)>,
    pub shading: Vec<Patch>,
    pub boundaries: Vec<Curve>,
    pub guides: Vec<Curve>,
    pub orbits: Vec<Curve>,
    pub markers: Vec<Marker>,
    /// Side of the square plot area in pixels.
    pub size: f64,
}

impl Scene {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            x_range,
            y_range,
            x_ticks: Vec::new(),
            y_ticks: Vec::new(),
            shading: Vec::new(),
            boundaries: Vec::new(),
            guides: Vec::new(),
            orbits: Vec::new(),
            markers: Vec::new(),
            size: 800.0,
        }
    }
}

const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x_range: (f64, f64),
    y_range: (f64, f64),
    size: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.size
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + self.size - (v - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.size
    }
}

fn path_data(frame: &Frame, pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.2} {:.2}", frame.x(x), frame.y(y));
    }
    d
}

fn write_curves(svg: &mut String, frame: &Frame, id: &str, curves: &[Curve], dash: Option<&str>) {
    let _ = writeln!(svg, r#"<g id="{id}" fill="none" stroke-linejoin="round">"#);
    for c in curves.iter().filter(|c| c.points.len() > 1) {
        let dash = dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            svg,
            r#"<path d="{}" stroke="{}" stroke-width="{:.2}"{dash}/>"#,
            path_data(frame, &c.points),
            c.stroke,
            c.width
        );
    }
    svg.push_str("</g>\n");
}

pub fn render_svg(scene: &Scene) -> String {
    let frame = Frame {
        x_range: scene.x_range,
        y_range: scene.y_range,
        size: scene.size,
    };
    let full = scene.size + 2.0 * MARGIN;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full:.0}" height="{full:.0}" viewBox="0 0 {full:.0} {full:.0}">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot"><rect x="{MARGIN:.0}" y="{MARGIN:.0}" width="{0:.0}" height="{0:.0}"/></clipPath></defs>"#,
        scene.size
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    svg.push_str("<g id=\"shading\" clip-path=\"url(#plot)\" stroke=\"none\" shape-rendering=\"crispEdges\">\n");
    for p in &scene.shading {
        let (xa, xb) = (frame.x(p.x0), frame.x(p.x1));
        let (ya, yb) = (frame.y(p.y1), frame.y(p.y0));
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            xa,
            ya,
            xb - xa,
            yb - ya,
            p.fill
        );
    }
    svg.push_str("</g>\n");

    svg.push_str("<g clip-path=\"url(#plot)\">\n");
    write_curves(&mut svg, &frame, "boundary", &scene.boundaries, None);
    write_curves(&mut svg, &frame, "guides", &scene.guides, Some("6 4"));
    write_curves(&mut svg, &frame, "orbits", &scene.orbits, None);
    svg.push_str("</g>\n");

    svg.push_str("<g id=\"markers\">\n");
    for m in &scene.markers {
        let (x, y) = (frame.x(m.x), frame.y(m.y));
        match m.shape {
            MarkerShape::Circle => {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{}" stroke="black" stroke-width="1"/>"#,
                    m.color
                );
            }
            MarkerShape::Cross => {
                let _ = writeln!(
                    svg,
                    r#"<path d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="{}" stroke-width="2.5"/>"#,
                    x - 5.0,
                    y - 5.0,
                    x + 5.0,
                    y + 5.0,
                    x - 5.0,
                    y + 5.0,
                    x + 5.0,
                    y - 5.0,
                    m.color
                );
            }
            MarkerShape::Diamond => {
                let _ = writeln!(
                    svg,
                    r#"<path d="M{x:.2} {:.2}L{:.2} {y:.2}L{x:.2} {:.2}L{:.2} {y:.2}Z" fill="{}" stroke="black" stroke-width="1"/>"#,
                    y - 6.0,
                    x + 6.0,
                    y + 6.0,
                    x - 6.0,
                    m.color
                );
            }
        }
    }
    svg.push_str("</g>\n");

    // axes
    svg.push_str("<g id=\"axes\" font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n");
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN:.0}" y="{MARGIN:.0}" width="{0:.0}" height="{0:.0}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        scene.size
    );
    let bottom = MARGIN + scene.size;
    for (v, label) in &scene.x_ticks {
        let x = frame.x(*v);
        let _ = writeln!(
            svg,
            r#"<path d="M{x:.2} {bottom:.2}L{x:.2} {:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 6.0,
            bottom + 22.0,
            escape(label)
        );
    }
    for (v, label) in &scene.y_ticks {
        let y = frame.y(*v);
        let _ = writeln!(
            svg,
            r#"<path d="M{MARGIN:.2} {y:.2}L{:.2} {y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            MARGIN - 9.0,
            y + 5.0,
            escape(label)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN + 0.5 * scene.size,
        full - 12.0,
        escape(&scene.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        MARGIN + 0.5 * scene.size,
        escape(&scene.y_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="36" text-anchor="middle" font-size="16">{}</text>"#,
        0.5 * full,
        escape(&scene.title)
    );
    svg.push_str("</g>\n</svg>\n");
    svg
}
