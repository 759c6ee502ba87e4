//! Inner parallel bodies, rolled sets and the inner kernel.

use serde::{Deserialize, Serialize};

use super::chain::{ArcPolygon, ArcRegion};
use super::offset::{raw_offset, trim_chains};
use super::point::Point;
use super::polygon::Polygon;
use super::GeometryError;

/// Component of the inner kernel (the erosion at the inradius).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelPiece {
    Point { at: Point },
    Segment { a: Point, b: Point },
}

impl KernelPiece {
    pub fn length(&self) -> f64 {
        match self {
            KernelPiece::Point { .. } => 0.0,
            KernelPiece::Segment { a, b } => a.dist(*b),
        }
    }

    /// Closed `r`-neighbourhood.
    pub fn neighbourhood(&self, r: f64) -> ArcPolygon {
        match *self {
            KernelPiece::Point { at } => ArcPolygon::circle(at, r),
            KernelPiece::Segment { a, b } => ArcPolygon::stadium(a, b, r),
        }
    }

    fn from_vertices(pts: &[Point], point_tol: f64) -> KernelPiece {
        let mut best = (0.0, pts[0], pts[0]);
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                let d = p.dist(*q);
                if d > best.0 {
                    best = (d, *p, *q);
                }
            }
        }
        if best.0 < point_tol {
            let c = pts.iter().fold(Point::ORIGIN, |s, p| s + *p) / pts.len() as f64;
            KernelPiece::Point { at: c }
        } else {
            KernelPiece::Segment { a: best.1, b: best.2 }
        }
    }
}

/// Erosion `{x : dist(x, complement) >= r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnerBody {
    Empty,
    /// Degenerate erosion at the inradius.
    Kernel {
        pieces: Vec<KernelPiece>,
    },
    Region {
        region: ArcRegion,
    },
}

impl InnerBody {
    pub fn is_empty(&self) -> bool {
        matches!(self, InnerBody::Empty)
    }

    pub fn component_count(&self) -> usize {
        match self {
            InnerBody::Empty => 0,
            InnerBody::Kernel { pieces } => pieces.len(),
            InnerBody::Region { region } => region.components.len(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            InnerBody::Region { region } => region.area(),
            _ => 0.0,
        }
    }
}

fn clip(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let len = poly.len();
    for i in 0..len {
        let cur = poly[i];
        let prev = poly[(i + len - 1) % len];
        let dc = n.dot(cur) - c;
        let dp = n.dot(prev) - c;
        if dc >= 0.0 {
            if dp < 0.0 {
                out.push(prev + (cur - prev) * (dp / (dp - dc)));
            }
            out.push(cur);
        } else if dp >= 0.0 {
            out.push(prev + (cur - prev) * (dp / (dp - dc)));
        }
    }
    out
}

/// Erosion of a convex polygon by half-plane clipping; vertices of the (possibly
/// degenerate) result.
pub fn clip_erosion(poly: &Polygon, r: f64) -> Vec<Point> {
    let mut cur: Vec<Point> = poly.vertices().to_vec();
    for (a, b) in poly.edges() {
        let n = (b - a).normalized().perp();
        cur = clip(&cur, n, n.dot(a) + r);
        if cur.is_empty() {
            break;
        }
    }
    let tol = 1e-14 * poly.scale().max(1.0);
    let mut out: Vec<Point> = Vec::with_capacity(cur.len());
    for p in cur {
        if out.last().is_none_or(|q: &Point| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
        out.pop();
    }
    out
}

fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let o = pts[0];
    0.5 * (1..n.saturating_sub(1)).map(|i| (pts[i] - o).cross(pts[i + 1] - o)).sum::<f64>()
}

/// Positive-area components of the erosion of a polygon.
pub fn erode_polygon(poly: &Polygon, convex: bool, r: f64, tol: f64) -> Vec<ArcPolygon> {
    if convex {
        let v = clip_erosion(poly, r);
        if v.len() >= 3 && signed_area(&v) > 0.0 {
            vec![ArcPolygon::from_vertices(&v)]
        } else {
            Vec::new()
        }
    } else {
        let boundary = poly.to_arc_polygon();
        let raw = raw_offset(&boundary, -r);
        trim_chains(&[raw], tol, |m| poly.contains(m) && poly.boundary_distance(m) >= r - tol)
    }
}

/// Inradius and kernel of a polygon, by bisection on non-emptiness of the erosion.
pub fn polygon_inradius(poly: &Polygon, convex: bool, tol: f64) -> Result<(f64, Vec<KernelPiece>), GeometryError> {
    let nonempty = |r: f64| !erode_polygon(poly, convex, r, tol).is_empty();
    let mut lo = 0.0;
    let mut hi = (poly.area() / std::f64::consts::PI).sqrt() * (1.0 + 1e-9);
    if nonempty(hi) {
        return Err(GeometryError::Numerical("inradius bracket failed".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if nonempty(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    let big_r = lo;
    if big_r <= 0.0 {
        return Err(GeometryError::DegenerateArea(poly.area()));
    }
    let scale = poly.scale().max(poly.diameter());
    let point_tol = if convex { 1e-7 * scale } else { 1e-6 * scale };
    let mut pieces = Vec::new();
    for shrink in [1e-10, 1e-9, 1e-8, 1e-7] {
        let comps = erode_polygon(poly, convex, big_r * (1.0 - shrink), tol);
        if !comps.is_empty() {
            pieces = comps
                .iter()
                .map(|c| KernelPiece::from_vertices(&c.vertices().collect::<Vec<_>>(), point_tol))
                .collect();
            break;
        }
    }
    if pieces.is_empty() {
        return Err(GeometryError::Numerical("kernel extraction failed".into()));
    }
    Ok((big_r, pieces))
}

/// Rolled set: the closed `r`-neighbourhood of an inner body.
pub fn roll(inner: &InnerBody, r: f64, tol: f64) -> Result<ArcRegion, GeometryError> {
    match inner {
        InnerBody::Empty => Err(GeometryError::EmptyInnerBody),
        InnerBody::Kernel { pieces } => Ok(ArcRegion::new(pieces.iter().map(|k| k.neighbourhood(r)).collect())),
        InnerBody::Region { region } => {
            if region.components.len() == 1 && region.components[0].is_locally_convex(1e-12) {
                let raw = raw_offset(&region.components[0], r);
                return Ok(ArcRegion::single(ArcPolygon::from_elements_unchecked(raw)));
            }
            let chains: Vec<_> = region.components.iter().map(|c| raw_offset(c, r)).collect();
            let loops = trim_chains(&chains, tol, |m| !region.contains(m) && region.boundary_distance(m) >= r - tol);
            if loops.is_empty() {
                return Err(GeometryError::Numerical(format!("roll at r={r} produced no boundary")));
            }
            Ok(ArcRegion::new(loops))
        }
    }
}
