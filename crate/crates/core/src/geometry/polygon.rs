use serde::{Deserialize, Serialize};

use super::chain::ArcPolygon;
use super::point::{segment_distance, Point};
use super::{GeometryError, EPS_GEOM};

/// Simple polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

fn segments_touch(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let qp = c - a;
    if denom.abs() > 1e-14 * r.norm() * s.norm() {
        let t = qp.cross(s) / denom;
        let u = qp.cross(r) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return true;
        }
    }
    segment_distance(a, c, d).0 <= tol
        || segment_distance(b, c, d).0 <= tol
        || segment_distance(c, a, b).0 <= tol
        || segment_distance(d, a, b).0 <= tol
}

impl Polygon {
    /// Validates a vertex list: drops repeated consecutive vertices, rejects
    /// self-intersections and zero area, and orients counterclockwise.
    pub fn new(raw: Vec<Point>) -> Result<Self, GeometryError> {
        if raw.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::InvalidInput("non-finite vertex coordinate".into()));
        }
        let scale = raw.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let tol = EPS_GEOM * scale;
        let mut v: Vec<Point> = Vec::with_capacity(raw.len());
        for p in raw {
            if v.last().is_none_or(|q| q.dist(p) > tol) {
                v.push(p);
            }
        }
        while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= tol {
            v.pop();
        }
        if v.len() < 3 {
            return Err(GeometryError::TooFewVertices(v.len()));
        }
        let n = v.len();
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            for j in (i + 1)..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    // adjacent edges may only share their common vertex
                    let (shared, other_end, own) = if j == i + 1 { (b, v[(j + 1) % n], a) } else { (a, v[j], b) };
                    let e1 = own - shared;
                    let e2 = other_end - shared;
                    if e1.cross(e2).abs() <= tol * e1.norm().max(e2.norm()) && e1.dot(e2) > 0.0 {
                        return Err(GeometryError::SelfIntersecting { edges: (i, j) });
                    }
                    continue;
                }
                let (c, d) = (v[j], v[(j + 1) % n]);
                if segments_touch(a, b, c, d, tol) {
                    return Err(GeometryError::SelfIntersecting { edges: (i, j) });
                }
            }
        }
        let mut poly = Polygon { vertices: v };
        let sa = poly.signed_area();
        if sa.abs() <= EPS_GEOM * scale * scale {
            return Err(GeometryError::DegenerateArea(sa.abs()));
        }
        if sa < 0.0 {
            poly.vertices.reverse();
        }
        Ok(poly)
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max(p.dist(*q));
            }
        }
        d
    }

    /// Cross product of the edges at vertex `i`; negative at reflex vertices.
    pub fn turn_at(&self, i: usize) -> f64 {
        let n = self.len();
        let prev = self.vertices[(i + n - 1) % n];
        let cur = self.vertices[i];
        let next = self.vertices[(i + 1) % n];
        (cur - prev).cross(next - cur)
    }

    pub fn is_convex(&self) -> bool {
        let tol = EPS_GEOM * self.scale().powi(2);
        (0..self.len()).all(|i| self.turn_at(i) >= -tol)
    }

    pub fn reflex_vertices(&self) -> Vec<usize> {
        let tol = EPS_GEOM * self.scale().powi(2);
        (0..self.len()).filter(|&i| self.turn_at(i) < -tol).collect()
    }

    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges().map(|(a, b)| segment_distance(p, a, b).0).fold(f64::INFINITY, f64::min)
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    pub fn to_arc_polygon(&self) -> ArcPolygon {
        ArcPolygon::from_vertices(&self.vertices)
    }

    /// Regular `n`-gon with circumradius `r`.
    pub fn regular(n: usize, center: Point, r: f64) -> Result<Self, GeometryError> {
        let v = (0..n).map(|k| center + Point::polar(std::f64::consts::TAU * k as f64 / n as f64) * r).collect();
        Self::new(v)
    }

    pub fn rectangle(lo: Point, hi: Point) -> Result<Self, GeometryError> {
        Self::new(vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)])
    }
}
