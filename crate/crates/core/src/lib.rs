//! p-Cheeger sets, isoperimetric profiles and prescribed-curvature minimizers of planar
//! polygonal domains without necks.
//!
//! The [`profile`] module builds the family of rolled sets `E_r` (erosion by `r` followed by
//! dilation with the disk of radius `r`) from which `F(κ)`, `I(V)`, `𝔎(V)` and `H(1)` are read;
//! [`pcheeger`] minimizes `P/|E|^p` along it; [`oracle`] is an independent min-cut check.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod pcheeger;
pub mod profile;
pub mod scalar;

pub use error::Error;
pub use geometry::{Domain, Point, Polygon};
pub use pcheeger::{solve_h, CheegerResult};
pub use profile::{IsoProfile, ProfileOptions};
