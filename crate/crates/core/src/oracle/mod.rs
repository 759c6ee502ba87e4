//! Grid oracle: `min P(A) − κ|A|` over pixel sets of a rasterized domain, solved exactly by
//! minimum cut with Cauchy–Crofton perimeter weights.

mod maxflow;

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{Domain, Point};
use maxflow::GraphBuilder;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("grid {nx}×{ny} exceeds the limit of {limit} pixels")]
    GridTooLarge { nx: usize, ny: usize, limit: usize },
    #[error("invalid grid spacing {0}")]
    InvalidSpacing(f64),
    #[error("invalid curvature {0}")]
    InvalidKappa(f64),
    #[error("mask is empty")]
    EmptyMask,
    #[error("no sign change of the minimal value")]
    NoSignChange,
    #[error("mask has {mask} pixels, grid has {grid}")]
    ShapeMismatch { mask: usize, grid: usize },
}

/// Default cap on grid size.
pub const MAX_PIXELS: usize = 4096 * 4096;
/// Integer resolution of the stencil weights.
pub const QUANT: f64 = (1u64 << 20) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StencilKind {
    #[serde(rename = "4")]
    N4,
    #[serde(rename = "8")]
    N8,
    #[serde(rename = "16")]
    N16,
}

impl StencilKind {
    pub fn neighbours(self) -> usize {
        match self {
            StencilKind::N4 => 4,
            StencilKind::N8 => 8,
            StencilKind::N16 => 16,
        }
    }

    pub fn from_neighbours(n: usize) -> Option<Self> {
        match n {
            4 => Some(StencilKind::N4),
            8 => Some(StencilKind::N8),
            16 => Some(StencilKind::N16),
            _ => None,
        }
    }

    /// Systematic relative error allowed by [`compare`] for this stencil.
    pub fn bias(self) -> f64 {
        match self {
            StencilKind::N4 => 0.22,
            StencilKind::N8 => 0.052,
            StencilKind::N16 => 0.0144,
        }
    }
}

/// Symmetric list of neighbour offsets with Cauchy–Crofton weights in units of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil {
    pub kind: StencilKind,
    pub offsets: Vec<(i32, i32)>,
    pub weights: Vec<f64>,
    /// `weights · QUANT`, rounded.
    pub units: Vec<i64>,
}

impl Stencil {
    pub fn new(kind: StencilKind) -> Self {
        let mut half: Vec<(i32, i32)> = vec![(1, 0), (0, 1)];
        if kind != StencilKind::N4 {
            half.extend([(1, 1), (-1, 1)]);
        }
        if kind == StencilKind::N16 {
            half.extend([(2, 1), (1, 2), (-1, 2), (-2, 1)]);
        }
        let angle = |o: &(i32, i32)| f64::atan2(o.1 as f64, o.0 as f64);
        half.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        let m = half.len();
        let mut offsets = Vec::with_capacity(2 * m);
        let mut weights = Vec::with_capacity(2 * m);
        for k in 0..m {
            let prev = angle(&half[(k + m - 1) % m]) - if k == 0 { PI } else { 0.0 };
            let next = angle(&half[(k + 1) % m]) + if k + 1 == m { PI } else { 0.0 };
            let dphi = 0.5 * (next - prev);
            let (dx, dy) = half[k];
            let len = ((dx * dx + dy * dy) as f64).sqrt();
            let w = dphi / (2.0 * len);
            offsets.push((dx, dy));
            weights.push(w);
            offsets.push((-dx, -dy));
            weights.push(w);
        }
        let units = weights.iter().map(|w| (w * QUANT).round() as i64).collect();
        Stencil { kind, offsets, weights, units }
    }
}

/// Rasterized domain with stencil and curvature.
#[derive(Clone, Debug)]
pub struct GridProblem {
    pub spacing: f64,
    /// Lower-left corner of pixel `(0, 0)`.
    pub origin: Point,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `mask[j·nx + i]` for pixel column `i`, row `j` counted upward.
    pub mask: Vec<bool>,
    pub stencil: Stencil,
    pub kappa: f64,
    /// Pixels forced into every competitor.
    pub seeds: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutResult {
    pub value: f64,
    pub selected: Vec<bool>,
    pub volume: f64,
    pub perimeter_estimate: f64,
    /// Integer objective in units of `h/QUANT`, the quantity minimized exactly.
    pub energy_units: i64,
}

/// Mask of pixels whose centers lie in the domain.
pub fn rasterize(domain: &Domain, h: f64) -> Result<GridProblem, OracleError> {
    rasterize_with(domain, h, MAX_PIXELS)
}

pub fn rasterize_with(domain: &Domain, h: f64, limit: usize) -> Result<GridProblem, OracleError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::InvalidSpacing(h));
    }
    let (lo, hi) = domain.bbox();
    let span = |a: f64, b: f64| ((b - a) / h - 1e-9).ceil().max(1.0);
    let (fx, fy) = (span(lo.x, hi.x), span(lo.y, hi.y));
    if fx * fy > limit as f64 {
        return Err(OracleError::GridTooLarge { nx: fx as usize, ny: fy as usize, limit });
    }
    let (nx, ny) = (fx as usize, fy as usize);
    let mask: Vec<bool> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let c = Point::new(lo.x + ((k % nx) as f64 + 0.5) * h, lo.y + ((k / nx) as f64 + 0.5) * h);
            domain.contains(c)
        })
        .collect();
    Ok(GridProblem {
        spacing: h,
        origin: lo,
        nx,
        ny,
        seeds: vec![false; mask.len()],
        mask,
        stencil: Stencil::new(StencilKind::N16),
        kappa: 0.0,
    })
}

impl GridProblem {
    pub fn new(
        spacing: f64,
        nx: usize,
        ny: usize,
        mask: Vec<bool>,
        stencil: StencilKind,
        kappa: f64,
    ) -> Result<Self, OracleError> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(OracleError::InvalidSpacing(spacing));
        }
        if mask.len() != nx * ny {
            return Err(OracleError::ShapeMismatch { mask: mask.len(), grid: nx * ny });
        }
        Ok(GridProblem {
            spacing,
            origin: Point::ORIGIN,
            nx,
            ny,
            seeds: vec![false; mask.len()],
            mask,
            stencil: Stencil::new(stencil),
            kappa,
        })
    }

    pub fn with_stencil(mut self, kind: StencilKind) -> Self {
        self.stencil = Stencil::new(kind);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn pixel_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn pixel_center(&self, k: usize) -> Point {
        let h = self.spacing;
        self.origin + Point::new(((k % self.nx) as f64 + 0.5) * h, ((k / self.nx) as f64 + 0.5) * h)
    }

    /// Marks the mask pixels whose centers lie within `radius` of `center` as forced.
    pub fn seed_disk(&mut self, center: Point, radius: f64) {
        for k in 0..self.mask.len() {
            self.seeds[k] = self.mask[k] && self.pixel_center(k).dist(center) <= radius;
        }
    }

    fn neighbour(&self, k: usize, o: (i32, i32)) -> Option<usize> {
        let i = (k % self.nx) as i64 + o.0 as i64;
        let j = (k / self.nx) as i64 + o.1 as i64;
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            None
        } else {
            Some(j as usize * self.nx + i as usize)
        }
    }

    /// Curvature term per pixel in weight units.
    pub fn kappa_units(&self) -> i64 {
        (self.kappa * self.spacing * QUANT).round() as i64
    }

    /// Stencil-weighted boundary of a pixel set, in units of `h/QUANT`.
    pub fn perimeter_units(&self, selected: &[bool]) -> i64 {
        let mut total = 0;
        for k in (0..selected.len()).filter(|&k| selected[k]) {
            for (o, w) in self.stencil.offsets.iter().zip(&self.stencil.units) {
                if !self.neighbour(k, *o).is_some_and(|n| selected[n]) {
                    total += w;
                }
            }
        }
        total
    }

    pub fn energy_units(&self, selected: &[bool]) -> i64 {
        let count = selected.iter().filter(|s| **s).count() as i64;
        self.perimeter_units(selected) - self.kappa_units() * count
    }

    fn result(&self, selected: Vec<bool>) -> CutResult {
        let h = self.spacing;
        let count = selected.iter().filter(|s| **s).count();
        let energy_units = self.energy_units(&selected);
        let perimeter_estimate = self.perimeter_units(&selected) as f64 * h / QUANT;
        let volume = count as f64 * h * h;
        CutResult {
            value: perimeter_estimate - self.kappa * volume,
            selected,
            volume,
            perimeter_estimate,
            energy_units,
        }
    }
}

/// Global minimizer of the discrete energy, the largest one among ties.
pub fn min_cut_f(grid: &GridProblem) -> Result<CutResult, OracleError> {
    if !(grid.kappa >= 0.0 && grid.kappa.is_finite()) {
        return Err(OracleError::InvalidKappa(grid.kappa));
    }
    // forced pixels are contracted into the source
    let free = |k: usize| grid.mask[k] && !grid.seeds[k];
    let mut index = vec![u32::MAX; grid.mask.len()];
    let pixels: Vec<usize> = (0..grid.mask.len()).filter(|&k| free(k)).collect();
    for (v, &k) in pixels.iter().enumerate() {
        index[k] = v as u32;
    }
    let u = grid.kappa_units();
    let mut b = GraphBuilder::new(pixels.len());
    for (v, &k) in pixels.iter().enumerate() {
        let (mut to_seed, mut outside) = (0, 0);
        for (o, &w) in grid.stencil.offsets.iter().zip(&grid.stencil.units) {
            match grid.neighbour(k, *o) {
                Some(m) if free(m) => {
                    // each unordered pair once, with both directions
                    if m > k {
                        b.add_edge(v, index[m] as usize, w, w);
                    }
                }
                Some(m) if grid.seeds[m] => to_seed += w,
                _ => outside += w,
            }
        }
        b.add_terminal(v, u + to_seed, outside);
    }
    let mut g = b.build();
    g.max_preflow();
    let side = g.maximal_source_side();
    let mut selected = grid.seeds.clone();
    for (v, &k) in pixels.iter().enumerate() {
        selected[k] = side[v];
    }
    Ok(grid.result(selected))
}

/// Discrete Cheeger constant `min P(A)/|A|` over nonempty pixel sets, by Newton iteration
/// on the sign change of the minimal value in `κ`.
pub fn oracle_h1(domain: &Domain, h: f64, stencil: StencilKind) -> Result<(f64, CutResult), OracleError> {
    let grid = rasterize(domain, h)?.with_stencil(stencil);
    if grid.pixel_count() == 0 {
        return Err(OracleError::EmptyMask);
    }
    let whole = grid.result(grid.mask.clone());
    let mut kappa = whole.perimeter_estimate / whole.volume;
    let mut best = whole;
    for _ in 0..100 {
        let cut = min_cut_f(&grid.clone().with_kappa(kappa))?;
        if cut.volume == 0.0 {
            break;
        }
        let ratio = cut.perimeter_estimate / cut.volume;
        if ratio >= kappa * (1.0 - 1e-14) {
            best = cut;
            break;
        }
        kappa = ratio;
        best = cut;
    }
    let h1 = best.perimeter_estimate / best.volume;
    if !h1.is_finite() {
        return Err(OracleError::NoSignChange);
    }
    Ok((h1, best))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub kappa: f64,
    pub volume: f64,
    pub perimeter: f64,
    pub value: f64,
}

/// The seeded grid and its cuts for each `κ`: minimizers of `P − κ|A|` containing the
/// discrete inball.
pub fn seeded_cuts(
    domain: &Domain,
    h: f64,
    stencil: StencilKind,
    kappas: &[f64],
) -> Result<(GridProblem, Vec<CutResult>), OracleError> {
    let mut grid = rasterize(domain, h)?.with_stencil(stencil);
    let inr = domain.inradius();
    grid.seed_disk(inr.witnesses()[0], inr.radius);
    let cuts =
        kappas.par_iter().map(|&kappa| min_cut_f(&grid.clone().with_kappa(kappa))).collect::<Result<Vec<_>, _>>()?;
    Ok((grid, cuts))
}

/// Lagrangian sweep: `(V, P)` of the seeded minimizers, one per `κ`.
pub fn oracle_i(domain: &Domain, h: f64, stencil: StencilKind, kappas: &[f64]) -> Result<Vec<SweepPoint>, OracleError> {
    let (_, cuts) = seeded_cuts(domain, h, stencil, kappas)?;
    Ok(kappas
        .iter()
        .zip(cuts)
        .map(|(&kappa, c)| SweepPoint { kappa, volume: c.volume, perimeter: c.perimeter_estimate, value: c.value })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub pass: bool,
    pub error: f64,
    pub relative_error: f64,
    pub bound: f64,
    pub h: f64,
}

/// Error constant multiplying `√h`.
pub const COMPARE_C: f64 = 0.08;

/// Pass iff `|Δ| ≤ (C·√h + bias(stencil))·|profile value|`.
pub fn compare(profile_value: f64, oracle_value: f64, h: f64, stencil: StencilKind) -> Comparison {
    let scale = profile_value.abs();
    let error = (profile_value - oracle_value).abs();
    let bound = (COMPARE_C * h.sqrt() + stencil.bias()) * scale;
    Comparison { pass: error <= bound, error, relative_error: error / scale, bound, h }
}

/// Plain PBM (`P1`) with the top row first.
pub fn to_pbm(nx: usize, ny: usize, selected: &[bool]) -> String {
    let mut s = format!("P1\n{nx} {ny}\n");
    for j in (0..ny).rev() {
        let row: Vec<&str> = (0..nx).map(|i| if selected[j * nx + i] { "1" } else { "0" }).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// CSV with header `kappa,volume,perimeter,value,h,stencil`.
pub fn sweep_csv(points: &[SweepPoint], h: f64, stencil: StencilKind) -> String {
    let mut s = String::from("kappa,volume,perimeter,value,h,stencil\n");
    for p in points {
        let _ = writeln!(
            s,
            "{:?},{:?},{:?},{:?},{:?},{}",
            p.kappa,
            p.volume,
            p.perimeter,
            p.value,
            h,
            stencil.neighbours()
        );
    }
    s
}
