//! Planar primitives: polygons, arc-polygons, erosion, rolling, inradius and neck detection.

mod chain;
mod domain;
mod erode;
mod intersect;
mod io;
mod noneck;
mod offset;
mod point;
mod polygon;

pub use chain::{Arc, ArcPolygon, ArcRegion, Element};
pub use domain::{DiskSpec, Domain, Inradius, RolledSet, Shape};
pub use erode::{clip_erosion, roll, InnerBody, KernelPiece};
pub use intersect::{intersect, Hit};
pub use io::{chain_json, render_svg, svg_path};
pub use noneck::{contact_length, no_neck_check, NoNeckReport};
pub use offset::{raw_offset, trim_chains, turning_number};
pub use point::{segment_distance, turn_angle, Point};
pub use polygon::Polygon;

/// Relative geometric tolerance (scaled by the domain size).
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon edges {} and {} intersect", .edges.0, .edges.1)]
    SelfIntersecting { edges: (usize, usize) },
    #[error("polygon area {0:e} is degenerate")]
    DegenerateArea(f64),
    #[error("radius {r} exceeds the inradius {inradius}")]
    RadiusExceedsInradius { r: f64, inradius: f64 },
    #[error("inner body is empty")]
    EmptyInnerBody,
    #[error("numerical failure: {0}")]
    Numerical(String),
}
