use std::fmt::Write;

use gridcover::rational::to_f64;
use gridcover::{CoveringPath, Grid, Point, StopSet};

const SCALE: f64 = 32.0;

struct Frame {
    x0: f64,
    y1: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn px(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.to_f64();
        ((x - self.x0) * SCALE, (self.y1 - y) * SCALE)
    }
}

/// SVG with four layers: grid squares, lattice cells of the selected
/// centres, the path, and the stops (inside centres and boundary stops in
/// different colours).
pub fn render(g: &Grid, ss: &StopSet, path: &CoveringPath) -> String {
    let b = g.bbox();
    let margin = to_f64(&ss.lattice.k) + 0.5;
    let frame = Frame {
        x0: b.min_i as f64 - margin,
        y1: (b.max_j + 1) as f64 + margin,
        width: (b.width() as f64 + 2.0 * margin) * SCALE,
        height: (b.height() as f64 + 2.0 * margin) * SCALE,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = frame.width,
        h = frame.height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    out.push_str("<g id=\"grid\" fill=\"#e4e4e4\" stroke=\"#9a9a9a\" stroke-width=\"0.5\">\n");
    for &(i, j) in g.squares() {
        let (x, y) = frame.px(&Point::from_ints(i, j + 1));
        let _ = writeln!(out, r#"<rect x="{x:.3}" y="{y:.3}" width="{SCALE}" height="{SCALE}"/>"#);
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"cells\" fill=\"none\" stroke=\"#5b8fd6\" stroke-width=\"0.8\">\n");
    for c in ss.c_in.iter().chain(&ss.c_out) {
        let pts: Vec<String> = ss
            .lattice
            .cell_polygon(&c.point)
            .iter()
            .map(|v| {
                let (x, y) = frame.px(v);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" "));
    }
    out.push_str("</g>\n");

    if path.stop_count() > 1 {
        let pts: Vec<String> = path
            .stops()
            .iter()
            .map(|p| {
                let (x, y) = frame.px(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline id="path" fill="none" stroke="#d2452f" stroke-width="1.5" points="{}"/>"##,
            pts.join(" ")
        );
    }

    out.push_str("<g id=\"outside-centres\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.8\">\n");
    for c in &ss.c_out {
        let (x, y) = frame.px(&c.point);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2"/>"#);
    }
    out.push_str("</g>\n");
    out.push_str("<g id=\"inside-stops\" fill=\"#1f3f8f\">\n");
    for c in &ss.c_in {
        let (x, y) = frame.px(&c.point);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#);
    }
    out.push_str("</g>\n");
    out.push_str("<g id=\"boundary-stops\" fill=\"#e39b1b\">\n");
    for s in &ss.projected {
        let (x, y) = frame.px(&s.stop);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
