use serde::{Deserialize, Serialize};

use super::chain::{ArcRegion, Element};
use super::domain::Domain;
use super::GeometryError;

/// Connectivity of the erosions over sampled radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoNeckReport {
    pub passes: bool,
    /// Smallest sampled radius at which the erosion is disconnected.
    pub failing_radius: Option<f64>,
    pub max_components: usize,
    pub samples: usize,
}

/// Samples erosions at `samples` geometric radii in `(0, R]` and bisects around every
/// change in component count.
pub fn no_neck_check(domain: &Domain, samples: usize) -> Result<NoNeckReport, GeometryError> {
    let big_r = domain.inradius().radius;
    if domain.is_convex() {
        return Ok(NoNeckReport { passes: true, failing_radius: None, max_components: 1, samples: 0 });
    }
    let samples = samples.max(8);
    let r_min = 1e-4 * big_r;
    let count = |r: f64| -> Result<usize, GeometryError> { Ok(domain.erode(r)?.component_count()) };
    let radii: Vec<f64> = (0..samples).map(|k| r_min * (big_r / r_min).powf(k as f64 / (samples - 1) as f64)).collect();
    let mut counts = Vec::with_capacity(samples);
    for &r in &radii {
        counts.push(count(r)?);
    }
    let mut evaluated = samples;
    let mut failing: Option<f64> = None;
    let mut max_components = counts.iter().copied().max().unwrap_or(0);
    for k in 0..samples {
        if counts[k] > 1 {
            failing = Some(failing.map_or(radii[k], |f: f64| f.min(radii[k])));
        }
        if k + 1 < samples && counts[k] != counts[k + 1] {
            // look for a short disconnected window between the samples
            let (mut lo, mut hi) = (radii[k], radii[k + 1]);
            for _ in 0..24 {
                let mid = 0.5 * (lo + hi);
                let c = count(mid)?;
                evaluated += 1;
                max_components = max_components.max(c);
                if c > 1 {
                    failing = Some(failing.map_or(mid, |f: f64| f.min(mid)));
                }
                if c == counts[k] {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
    }
    Ok(NoNeckReport { passes: failing.is_none(), failing_radius: failing, max_components, samples: evaluated })
}

/// Length of the part of `∂E` lying on `∂Ω` within `tol`.
pub fn contact_length(domain: &Domain, set: &ArcRegion, tol: f64) -> f64 {
    const PIECES: usize = 64;
    set.elements()
        .map(|e: &Element| {
            let on = |t: f64| domain.boundary_distance(e.point_at(t)) <= tol;
            if matches!(e, Element::Segment { .. }) && on(0.0) && on(0.5) && on(1.0) {
                return e.length();
            }
            let hits = (0..PIECES).filter(|&k| on((k as f64 + 0.5) / PIECES as f64)).count();
            e.length() * hits as f64 / PIECES as f64
        })
        .sum()
}
