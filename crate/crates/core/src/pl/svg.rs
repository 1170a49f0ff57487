//! SVG pictures of curves, their multiple points and parameter covers.

use std::fmt::Write;

use super::{MultiplePointReport, PLCurve, ParamCover, Point};

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn bounds(points: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    let mut b = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in points {
        b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
    }
    let pad = 0.1 * (b.2 - b.0).max(b.3 - b.1).max(1e-9);
    (b.0 - pad, b.1 - pad, b.2 + pad, b.3 + pad)
}

/// Renders the curve, its multiple points, and (offset inward, one colour
/// per set) the arcs of a parameter cover.
pub fn curve_svg(c: &PLCurve, report: Option<&MultiplePointReport>, cover: Option<&ParamCover>) -> String {
    let pts: Vec<(f64, f64)> = c.vertices().iter().map(Point::to_f64).collect();
    let (x0, y0, x1, y1) = bounds(&pts);
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = 0.006 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {} {w} {h}" width="480" height="{}">"#,
        -y1,
        (480.0 * h / w).round()
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke-linejoin="round">"#);
    let poly: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
    let _ = writeln!(s, r#"<polygon points="{}" stroke="black" stroke-width="{stroke}"/>"#, poly.join(" "));
    if let Some(cover) = cover {
        for (k, set) in cover.sets.iter().enumerate() {
            let colour = PALETTE[k % PALETTE.len()];
            let shrink = 1.0 - 0.03 * (k + 1) as f64;
            let _ = writeln!(s, r#"<g stroke="{colour}" stroke-width="{}" opacity="0.8">"#, stroke * 0.8);
            let removed: Vec<(f64, f64)> = set.removed.iter().map(|p| c.point_at(p).to_f64()).collect();
            let shown: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", x * shrink, y * shrink)).collect();
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, shown.join(" "));
            for (x, y) in removed {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="white"/>"#,
                    x * shrink,
                    y * shrink,
                    stroke * 2.0
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }
    if let Some(r) = report {
        for p in &r.points {
            let (x, y) = p.location.to_f64();
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="{}" fill="red" stroke="none"/>"#, stroke * 2.5);
        }
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
