use serde::{Deserialize, Serialize};

use super::chain::{ArcPolygon, ArcRegion};
use super::erode::{erode_polygon, polygon_inradius, roll, InnerBody, KernelPiece};
use super::point::Point;
use super::polygon::Polygon;
use super::{GeometryError, EPS_GEOM};

/// Shape underlying a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shape {
    Polygon { vertices: Vec<Point> },
    Disk { disk: DiskSpec },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub center: Point,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Polygon { poly: Polygon, convex: bool },
    Disk(DiskSpec),
}

/// Inradius with the inner kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inradius {
    pub radius: f64,
    pub kernel: Vec<KernelPiece>,
}

impl Inradius {
    /// Centres of maximal inscribed balls representing the kernel.
    pub fn witnesses(&self) -> Vec<Point> {
        self.kernel
            .iter()
            .flat_map(|k| match *k {
                KernelPiece::Point { at } => vec![at],
                KernelPiece::Segment { a, b } => vec![a, b],
            })
            .collect()
    }

    /// Longest segment of the kernel, if the kernel is not a single point.
    pub fn segment_kernel(&self) -> Option<(Point, Point)> {
        self.kernel
            .iter()
            .filter_map(|k| match *k {
                KernelPiece::Segment { a, b } => Some((a, b)),
                KernelPiece::Point { .. } => None,
            })
            .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
    }

    pub fn is_segment_kernel(&self) -> bool {
        self.segment_kernel().is_some()
    }
}

/// Rolled set `E_r` with its measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RolledSet {
    pub r: f64,
    pub region: ArcRegion,
    pub volume: f64,
    pub perimeter: f64,
}

/// A validated planar domain with cached inradius and kernel.
#[derive(Clone, Debug)]
pub struct Domain {
    kind: Kind,
    boundary: ArcPolygon,
    inradius: Inradius,
    area: f64,
    perimeter: f64,
    scale: f64,
}

impl Domain {
    pub fn polygon(poly: Polygon) -> Result<Self, GeometryError> {
        let convex = poly.is_convex();
        let scale = poly.scale().max(poly.diameter());
        let tol = EPS_GEOM * scale;
        let (radius, kernel) = polygon_inradius(&poly, convex, tol)?;
        Ok(Domain {
            boundary: poly.to_arc_polygon(),
            area: poly.area(),
            perimeter: poly.perimeter(),
            inradius: Inradius { radius, kernel },
            kind: Kind::Polygon { poly, convex },
            scale,
        })
    }

    pub fn from_vertices(coords: &[[f64; 2]]) -> Result<Self, GeometryError> {
        Self::polygon(Polygon::from_coords(coords)?)
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !(radius.is_finite() && radius > 0.0) || !center.is_finite() {
            return Err(GeometryError::InvalidInput(format!("bad disk radius {radius}")));
        }
        let pi = std::f64::consts::PI;
        Ok(Domain {
            kind: Kind::Disk(DiskSpec { center, radius }),
            boundary: ArcPolygon::circle(center, radius),
            inradius: Inradius { radius, kernel: vec![KernelPiece::Point { at: center }] },
            area: pi * radius * radius,
            perimeter: 2.0 * pi * radius,
            scale: center.x.abs().max(center.y.abs()) + 2.0 * radius,
        })
    }

    pub fn from_shape(shape: &Shape) -> Result<Self, GeometryError> {
        match shape {
            Shape::Polygon { vertices } => Self::polygon(Polygon::new(vertices.clone())?),
            Shape::Disk { disk } => Self::disk(disk.center, disk.radius),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let shape: Shape =
            serde_json::from_str(text).map_err(|e| GeometryError::InvalidInput(format!("domain JSON: {e}")))?;
        Self::from_shape(&shape)
    }

    pub fn shape(&self) -> Shape {
        match &self.kind {
            Kind::Polygon { poly, .. } => Shape::Polygon { vertices: poly.vertices().to_vec() },
            Kind::Disk(d) => Shape::Disk { disk: *d },
        }
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match &self.kind {
            Kind::Polygon { poly, .. } => Some(poly),
            Kind::Disk(_) => None,
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.kind, Kind::Disk(_))
    }

    pub fn is_convex(&self) -> bool {
        match &self.kind {
            Kind::Polygon { convex, .. } => *convex,
            Kind::Disk(_) => true,
        }
    }

    pub fn boundary(&self) -> &ArcPolygon {
        &self.boundary
    }

    pub fn region(&self) -> ArcRegion {
        ArcRegion::single(self.boundary.clone())
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn inradius(&self) -> &Inradius {
        &self.inradius
    }

    /// Length scale used for tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Absolute geometric tolerance.
    pub fn tol(&self) -> f64 {
        EPS_GEOM * self.scale
    }

    pub fn bbox(&self) -> (Point, Point) {
        self.boundary.bbox()
    }

    pub fn contains(&self, p: Point) -> bool {
        match &self.kind {
            Kind::Polygon { poly, .. } => poly.contains(p),
            Kind::Disk(d) => p.dist(d.center) < d.radius,
        }
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        match &self.kind {
            Kind::Polygon { poly, .. } => poly.boundary_distance(p),
            Kind::Disk(d) => (p.dist(d.center) - d.radius).abs(),
        }
    }

    /// Erosion of the domain by `r`, in `[0, inradius]`.
    pub fn erode(&self, r: f64) -> Result<InnerBody, GeometryError> {
        let big_r = self.inradius.radius;
        if !r.is_finite() || r < 0.0 {
            return Err(GeometryError::InvalidInput(format!("erosion radius {r}")));
        }
        if r > big_r * (1.0 + 1e-12) {
            return Err(GeometryError::RadiusExceedsInradius { r, inradius: big_r });
        }
        let comps = match &self.kind {
            Kind::Disk(d) => vec![ArcPolygon::circle(d.center, d.radius - r)],
            Kind::Polygon { poly, convex } => erode_polygon(poly, *convex, r, self.tol()),
        };
        if comps.is_empty() {
            return Ok(InnerBody::Kernel { pieces: self.inradius.kernel.clone() });
        }
        Ok(InnerBody::Region { region: ArcRegion::new(comps) })
    }

    /// Rolled set `E_r` for `r` in `(0, inradius]`.
    pub fn rolled_set(&self, r: f64) -> Result<RolledSet, GeometryError> {
        if r <= 0.0 {
            return Err(GeometryError::InvalidInput(format!("rolling radius {r}")));
        }
        let inner = self.erode(r)?;
        let region = match roll(&inner, r, self.tol()) {
            // a sliver left just below the inradius
            Err(GeometryError::Numerical(_)) if r >= self.inradius.radius * (1.0 - 1e-6) => {
                roll(&InnerBody::Kernel { pieces: self.inradius.kernel.clone() }, r, self.tol())?
            }
            other => other?,
        };
        let (volume, perimeter) = region.measure();
        Ok(RolledSet { r, region, volume, perimeter })
    }

    /// Volume and perimeter of `E_r`, skipping the boundary when a closed form exists.
    pub fn rolled_measure(&self, r: f64) -> Result<(f64, f64), GeometryError> {
        if let Kind::Disk(d) = &self.kind {
            if r > 0.0 && r <= d.radius * (1.0 + 1e-12) {
                return Ok((self.area, self.perimeter));
            }
        }
        if let Kind::Polygon { convex: true, poly } = &self.kind {
            if r > 0.0 && r <= self.inradius.radius * (1.0 + 1e-12) {
                // Steiner formula; a degenerate clip still has the right perimeter
                let v = super::erode::clip_erosion(poly, r);
                if !v.is_empty() {
                    let (a, p) = if v.len() >= 3 {
                        let inner = ArcPolygon::from_vertices(&v);
                        (inner.area().max(0.0), inner.perimeter())
                    } else {
                        (0.0, 2.0 * v[0].dist(v[v.len() - 1]))
                    };
                    let pi = std::f64::consts::PI;
                    return Ok((a + r * p + pi * r * r, p + 2.0 * pi * r));
                }
            }
        }
        let s = self.rolled_set(r)?;
        Ok((s.volume, s.perimeter))
    }
}
