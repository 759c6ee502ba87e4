//! SVG and JSON export of boundary chains.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::chain::{ArcPolygon, ArcRegion, Element};
use super::point::Point;

fn fmt_pt(out: &mut String, p: Point) {
    let _ = write!(out, "{} {}", p.x, p.y);
}

/// SVG path data for one closed loop, in domain coordinates (y up; flip with a transform).
pub fn svg_path(lp: &ArcPolygon) -> String {
    let mut d = String::new();
    let Some(first) = lp.elements.first() else { return d };
    d.push('M');
    fmt_pt(&mut d, first.start());
    for e in &lp.elements {
        match e {
            Element::Segment { b, .. } => {
                d.push_str(" L");
                fmt_pt(&mut d, *b);
            }
            Element::Arc(c) => {
                let pieces = (c.sweep.abs() / FRAC_PI_2).ceil().max(1.0) as usize;
                for k in 1..=pieces {
                    let end = e.point_at(k as f64 / pieces as f64);
                    let sweep_flag = u8::from(c.is_ccw());
                    let _ = write!(d, " A{} {} 0 0 {} ", c.radius, c.radius, sweep_flag);
                    fmt_pt(&mut d, end);
                }
            }
        }
    }
    d.push_str(" Z");
    d
}

/// Standalone SVG document showing the domain outline and filled regions.
pub fn render_svg(domain: &ArcPolygon, layers: &[(&ArcRegion, &str)]) -> String {
    const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let (lo, hi) = domain.bbox();
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = 0.004 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="{}">"#,
        lo.x - pad,
        -(hi.y + pad),
        w,
        h,
        (600.0 * h / w).round()
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    for (i, (region, label)) in layers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for c in &region.components {
            let _ = writeln!(
                s,
                r#"<path class="set" data-label="{}" d="{}" fill="{}" fill-opacity="0.35" stroke="{}" stroke-width="{}"/>"#,
                label,
                svg_path(c),
                color,
                color,
                stroke
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<path class="domain" d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
        svg_path(domain),
        stroke
    );
    s.push_str("</g>\n</svg>\n");
    s
}

/// JSON chain dump: `{"components": [{"elements": [...]}]}` with angles in radians.
pub fn chain_json(region: &ArcRegion) -> Value {
    let comps: Vec<Value> = region
        .components
        .iter()
        .map(|c| {
            let elements: Vec<Value> = c
                .elements
                .iter()
                .map(|e| match e {
                    Element::Segment { a, b } => json!({"type": "segment", "a": [a.x, a.y], "b": [b.x, b.y]}),
                    Element::Arc(arc) => json!({
                        "type": "arc",
                        "center": [arc.center.x, arc.center.y],
                        "radius": arc.radius,
                        "startAngle": arc.start_angle,
                        "endAngle": arc.end_angle(),
                        "orientation": if arc.is_ccw() { "ccw" } else { "cw" },
                    }),
                })
                .collect();
            json!({"elements": elements, "area": c.area(), "perimeter": c.perimeter()})
        })
        .collect();
    json!({"components": comps})
}
