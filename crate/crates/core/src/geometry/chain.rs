use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::point::{segment_distance, turn_angle, wrap_two_pi, Point};
use super::GeometryError;

/// Circular arc traversed from `start_angle` through the signed `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

impl Arc {
    pub fn point_at_angle(&self, theta: f64) -> Point {
        self.center + Point::polar(theta) * self.radius
    }

    pub fn end_angle(&self) -> f64 {
        self.start_angle + self.sweep
    }

    pub fn is_ccw(&self) -> bool {
        self.sweep > 0.0
    }

    /// Parameter in `[0, 1]` of the direction `theta`, if it lies on the arc (with angular slack `slack`).
    pub fn param_of_angle(&self, theta: f64, slack: f64) -> Option<f64> {
        let span = self.sweep.abs();
        if span == 0.0 {
            return None;
        }
        let s = wrap_two_pi((theta - self.start_angle) * self.sweep.signum());
        if s <= span + slack {
            Some((s / span).min(1.0))
        } else if s >= TAU - slack {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Boundary element: a straight segment or a circular arc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Element {
    Segment { a: Point, b: Point },
    Arc(Arc),
}

impl Element {
    pub fn segment(a: Point, b: Point) -> Self {
        Element::Segment { a, b }
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        Element::Arc(Arc { center, radius, start_angle, sweep })
    }

    pub fn start(&self) -> Point {
        match self {
            Element::Segment { a, .. } => *a,
            Element::Arc(c) => c.point_at_angle(c.start_angle),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Element::Segment { b, .. } => *b,
            Element::Arc(c) => c.point_at_angle(c.end_angle()),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Element::Segment { a, b } => a.dist(*b),
            Element::Arc(c) => c.radius * c.sweep.abs(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Element::Segment { a, b } => a.lerp(*b, t),
            Element::Arc(c) => c.point_at_angle(c.start_angle + t * c.sweep),
        }
    }

    /// Unit tangent at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Point {
        match self {
            Element::Segment { a, b } => (*b - *a).normalized(),
            Element::Arc(c) => Point::polar(c.start_angle + t * c.sweep).perp() * c.sweep.signum(),
        }
    }

    /// Contribution of the element to the signed enclosed area (Green's theorem).
    pub fn signed_area(&self) -> f64 {
        self.signed_area_about(Point::ORIGIN)
    }

    /// Green's-theorem contribution with coordinates taken relative to `o`.
    pub fn signed_area_about(&self, o: Point) -> f64 {
        match self {
            Element::Segment { a, b } => 0.5 * (*a - o).cross(*b - o),
            Element::Arc(c) => {
                let (t0, t1) = (c.start_angle, c.end_angle());
                let r = c.radius;
                let m = c.center - o;
                0.5 * (r * m.x * (t1.sin() - t0.sin()) - r * m.y * (t1.cos() - t0.cos()) + r * r * c.sweep)
            }
        }
    }

    /// Restriction to the parameter range `[t0, t1]`.
    pub fn sub(&self, t0: f64, t1: f64) -> Element {
        match self {
            Element::Segment { a, b } => Element::segment(a.lerp(*b, t0), a.lerp(*b, t1)),
            Element::Arc(c) => {
                Element::Arc(Arc { start_angle: c.start_angle + t0 * c.sweep, sweep: (t1 - t0) * c.sweep, ..*c })
            }
        }
    }

    /// Parallel offset by `d` to the right of the direction of travel (outward for a
    /// counterclockwise boundary). `None` when an arc collapses to its centre; an arc
    /// offset past its centre comes back reflected through it.
    pub fn offset(&self, d: f64) -> Option<Element> {
        match self {
            Element::Segment { a, b } => {
                let n = -(*b - *a).normalized().perp();
                Some(Element::segment(*a + n * d, *b + n * d))
            }
            Element::Arc(c) => {
                let rho = if c.is_ccw() { c.radius + d } else { c.radius - d };
                if rho.abs() <= 1e-12 * c.radius.max(d.abs()) {
                    None
                } else if rho > 0.0 {
                    Some(Element::Arc(Arc { radius: rho, ..*c }))
                } else {
                    Some(Element::Arc(Arc { radius: -rho, start_angle: c.start_angle + PI, ..*c }))
                }
            }
        }
    }

    /// Distance from `p` to the element.
    pub fn distance(&self, p: Point) -> f64 {
        match self {
            Element::Segment { a, b } => segment_distance(p, *a, *b).0,
            Element::Arc(c) => {
                let v = p - c.center;
                let r = v.norm();
                if r > 0.0 && c.param_of_angle(v.angle(), 0.0).is_some() {
                    (r - c.radius).abs()
                } else if r == 0.0 {
                    c.radius
                } else {
                    p.dist(self.start()).min(p.dist(self.end()))
                }
            }
        }
    }

    /// Signed angle subtended by the element as seen from `p`.
    fn winding_angle(&self, p: Point) -> f64 {
        let (a, b) = (self.start() - p, self.end() - p);
        let chord = turn_angle(a, b);
        match self {
            Element::Segment { .. } => chord,
            Element::Arc(c) => {
                if (p - c.center).norm() >= c.radius {
                    return chord;
                }
                let side = (self.end() - self.start()).cross(p - self.start());
                if c.is_ccw() && side < 0.0 {
                    chord + TAU
                } else if !c.is_ccw() && side > 0.0 {
                    chord - TAU
                } else {
                    chord
                }
            }
        }
    }

    pub fn reversed(&self) -> Element {
        match self {
            Element::Segment { a, b } => Element::segment(*b, *a),
            Element::Arc(c) => Element::Arc(Arc { start_angle: c.end_angle(), sweep: -c.sweep, ..*c }),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let (s, e) = (self.start(), self.end());
        let mut lo = Point::new(s.x.min(e.x), s.y.min(e.y));
        let mut hi = Point::new(s.x.max(e.x), s.y.max(e.y));
        if let Element::Arc(c) = self {
            for k in 0..4 {
                let theta = k as f64 * PI / 2.0;
                if c.param_of_angle(theta, 0.0).is_some() {
                    let q = c.point_at_angle(theta);
                    lo = Point::new(lo.x.min(q.x), lo.y.min(q.y));
                    hi = Point::new(hi.x.max(q.x), hi.y.max(q.y));
                }
            }
        }
        (lo, hi)
    }
}

/// Closed, counterclockwise boundary loop made of segments and arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcPolygon {
    pub elements: Vec<Element>,
}

impl ArcPolygon {
    /// Builds a loop, checking that consecutive elements join within `tol`.
    pub fn new(elements: Vec<Element>, tol: f64) -> Result<Self, GeometryError> {
        if elements.is_empty() {
            return Err(GeometryError::InvalidInput("empty boundary loop".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            let next = &elements[(i + 1) % elements.len()];
            let gap = e.end().dist(next.start());
            if gap > tol {
                return Err(GeometryError::Numerical(format!(
                    "boundary loop not closed: gap {gap:e} after element {i}"
                )));
            }
        }
        Ok(ArcPolygon { elements })
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<Element>) -> Self {
        ArcPolygon { elements }
    }

    /// Circle of radius `r` as four quarter arcs.
    pub fn circle(center: Point, r: f64) -> Self {
        let elements = (0..4).map(|k| Element::arc(center, r, k as f64 * PI / 2.0, PI / 2.0)).collect();
        ArcPolygon { elements }
    }

    /// Stadium: the `r`-neighbourhood of the segment `[a, b]`.
    pub fn stadium(a: Point, b: Point, r: f64) -> Self {
        if a.dist(b) == 0.0 {
            return Self::circle(a, r);
        }
        let u = (b - a).normalized();
        let n = u.perp();
        let elements = vec![
            Element::segment(a - n * r, b - n * r),
            Element::arc(b, r, (-n).angle(), PI),
            Element::segment(b + n * r, a + n * r),
            Element::arc(a, r, n.angle(), PI),
        ];
        ArcPolygon { elements }
    }

    pub fn from_vertices(vertices: &[Point]) -> Self {
        let n = vertices.len();
        let elements = (0..n).map(|i| Element::segment(vertices[i], vertices[(i + 1) % n])).collect();
        ArcPolygon { elements }
    }

    pub fn signed_area(&self) -> f64 {
        let Some(first) = self.elements.first() else { return 0.0 };
        let o = first.start();
        self.elements.iter().map(|e| e.signed_area_about(o)).sum()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.elements.iter().map(Element::length).sum()
    }

    pub fn winding_number(&self, p: Point) -> f64 {
        self.elements.iter().map(|e| e.winding_angle(p)).sum::<f64>() / TAU
    }

    pub fn contains(&self, p: Point) -> bool {
        self.winding_number(p).abs() > 0.5
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.elements.iter().map(|e| e.distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn bbox(&self) -> (Point, Point) {
        self.elements.iter().map(Element::bbox).fold(
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), (a, b)| (Point::new(lo.x.min(a.x), lo.y.min(a.y)), Point::new(hi.x.max(b.x), hi.y.max(b.y))),
        )
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.elements.iter().map(Element::start)
    }

    /// Exterior turning angle at the junction after element `i`.
    pub fn corner_turn(&self, i: usize) -> f64 {
        let next = &self.elements[(i + 1) % self.elements.len()];
        turn_angle(self.elements[i].tangent_at(1.0), next.tangent_at(0.0))
    }

    /// True when every junction turns left (or not at all) and no arc is clockwise.
    pub fn is_locally_convex(&self, tol: f64) -> bool {
        let arcs_ok = self.elements.iter().all(|e| match e {
            Element::Arc(c) => c.is_ccw(),
            Element::Segment { .. } => true,
        });
        arcs_ok && (0..self.elements.len()).all(|i| self.corner_turn(i) >= -tol)
    }
}

/// A finite union of disjoint closed arc-polygons.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArcRegion {
    pub components: Vec<ArcPolygon>,
}

impl ArcRegion {
    pub fn new(components: Vec<ArcPolygon>) -> Self {
        ArcRegion { components }
    }

    pub fn single(c: ArcPolygon) -> Self {
        ArcRegion { components: vec![c] }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.components.iter().map(ArcPolygon::area).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.components.iter().map(ArcPolygon::perimeter).sum()
    }

    /// `(area, perimeter)`.
    pub fn measure(&self) -> (f64, f64) {
        (self.area(), self.perimeter())
    }

    pub fn contains(&self, p: Point) -> bool {
        self.components.iter().any(|c| c.contains(p))
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.components.iter().map(|c| c.boundary_distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the region (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        if self.contains(p) {
            0.0
        } else {
            self.boundary_distance(p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.components.iter().flat_map(|c| c.elements.iter())
    }
}
