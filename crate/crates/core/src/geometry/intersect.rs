//! Pairwise intersections of segments and circular arcs.

use super::chain::{Arc, Element};
use super::point::Point;

/// Intersection point with the parameters on both elements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub point: Point,
    pub t: f64,
    pub u: f64,
}

const PARAM_SLACK: f64 = 1e-12;

fn in_unit(t: f64) -> Option<f64> {
    if (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&t) {
        Some(t.clamp(0.0, 1.0))
    } else {
        None
    }
}

pub fn intersect(e: &Element, f: &Element, tol: f64) -> Vec<Hit> {
    match (e, f) {
        (Element::Segment { a, b }, Element::Segment { a: c, b: d }) => seg_seg(*a, *b, *c, *d, tol),
        (Element::Segment { a, b }, Element::Arc(arc)) => seg_arc(*a, *b, arc, tol),
        (Element::Arc(arc), Element::Segment { a, b }) => {
            seg_arc(*a, *b, arc, tol).into_iter().map(|h| Hit { t: h.u, u: h.t, ..h }).collect()
        }
        (Element::Arc(p), Element::Arc(q)) => arc_arc(p, q, tol),
    }
}

fn seg_seg(p: Point, p2: Point, q: Point, q2: Point, tol: f64) -> Vec<Hit> {
    let r = p2 - p;
    let s = q2 - q;
    let (lr, ls) = (r.norm(), s.norm());
    if lr == 0.0 || ls == 0.0 {
        return Vec::new();
    }
    let denom = r.cross(s);
    let qp = q - p;
    if denom.abs() <= 1e-13 * lr * ls {
        if (qp.cross(r) / lr).abs() > tol {
            return Vec::new();
        }
        // collinear overlap: report the overlap end points
        let mut hits = Vec::new();
        let rr = r.norm_sq();
        let ss = s.norm_sq();
        for (pt, on_e) in [(q, None), (q2, None), (p, Some(0.0)), (p2, Some(1.0))] {
            let t = on_e.unwrap_or_else(|| (pt - p).dot(r) / rr);
            let u = (pt - q).dot(s) / ss;
            if let (Some(t), Some(u)) = (in_unit(t), in_unit(u)) {
                if !hits.iter().any(|h: &Hit| h.point.dist(pt) <= tol) {
                    hits.push(Hit { point: pt, t, u });
                }
            }
        }
        return hits;
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    match (in_unit(t), in_unit(u)) {
        (Some(t), Some(u)) => vec![Hit { point: p + r * t, t, u }],
        _ => Vec::new(),
    }
}

fn seg_arc(a: Point, b: Point, arc: &Arc, tol: f64) -> Vec<Hit> {
    let d = b - a;
    let f = a - arc.center;
    let aa = d.norm_sq();
    if aa == 0.0 {
        return Vec::new();
    }
    let bb = 2.0 * f.dot(d);
    let cc = f.norm_sq() - arc.radius * arc.radius;
    let mut disc = bb * bb - 4.0 * aa * cc;
    // tangency within tolerance
    let slack = 4.0 * aa * 2.0 * arc.radius * tol;
    if disc < -slack {
        return Vec::new();
    }
    disc = disc.max(0.0);
    let sq = disc.sqrt();
    let roots: Vec<f64> = if sq == 0.0 {
        vec![-bb / (2.0 * aa)]
    } else {
        // numerically stable quadratic roots
        let q = -0.5 * (bb + bb.signum() * sq);
        let q = if q == 0.0 { -0.5 * sq } else { q };
        vec![q / aa, cc / q]
    };
    let ang_slack = tol / arc.radius.max(f64::MIN_POSITIVE);
    let mut hits: Vec<Hit> = Vec::new();
    for t in roots {
        let Some(t) = in_unit(t) else { continue };
        let pt = a + d * t;
        let Some(u) = arc.param_of_angle((pt - arc.center).angle(), ang_slack) else { continue };
        if !hits.iter().any(|h| h.point.dist(pt) <= tol * 0.01) {
            hits.push(Hit { point: pt, t, u });
        }
    }
    hits
}

fn arc_arc(p: &Arc, q: &Arc, tol: f64) -> Vec<Hit> {
    let dv = q.center - p.center;
    let d = dv.norm();
    let (r1, r2) = (p.radius, q.radius);
    if d <= tol {
        // concentric arcs either coincide or never meet; coincident pieces are not split
        return Vec::new();
    }
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
        return Vec::new();
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let base = p.center + dv * (a / d);
    let off = dv.perp() * (h / d);
    let cands = if h <= 0.0 { vec![base] } else { vec![base + off, base - off] };
    let mut hits: Vec<Hit> = Vec::new();
    for pt in cands {
        let t = p.param_of_angle((pt - p.center).angle(), tol / r1);
        let u = q.param_of_angle((pt - q.center).angle(), tol / r2);
        if let (Some(t), Some(u)) = (t, u) {
            if !hits.iter().any(|h| h.point.dist(pt) <= tol * 0.01) {
                hits.push(Hit { point: pt, t, u });
            }
        }
    }
    hits
}
