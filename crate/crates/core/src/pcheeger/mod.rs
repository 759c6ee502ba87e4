//! p-Cheeger constants `H(p)` and the volume map `𝔙(p)`, by minimizing `I(V)/V^p` over the
//! profile.

mod scan;

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::geometry::ArcRegion;
use crate::profile::{FlatKind, IsoProfile, IsoSet, Locus, ProfileError, Sample};
use crate::scalar::{golden_min, illinois};

pub use scan::{multivalue_probe, scan_v, LocalMin, MultivalueReport, PBar, Status, VMapScan, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PCheegerError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("exponent {0} is out of range")]
    InvalidExponent(f64),
    #[error("invalid p-grid: {0}")]
    InvalidGrid(String),
}

/// Relative tolerance under which two quotient values count as the same minimum.
pub const TOL_MIN: f64 = 1e-9;
/// Largest exponent accepted by the scans.
pub const P_MAX: f64 = 16.0;

/// Volumes of p-Cheeger sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolumeSet {
    /// `(lo, hi]`, every volume of a ball that fits.
    Interval {
        lo: f64,
        hi: f64,
    },
    Points {
        values: Vec<f64>,
    },
}

impl VolumeSet {
    pub fn points(&self) -> &[f64] {
        match self {
            VolumeSet::Points { values } => values,
            VolumeSet::Interval { .. } => &[],
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, VolumeSet::Interval { .. })
    }
}

impl fmt::Display for VolumeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolumeSet::Interval { lo, hi } => write!(f, "({lo}, {hi}]"),
            VolumeSet::Points { values } => {
                let parts: Vec<String> = values.iter().map(f64::to_string).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerResult {
    pub p: f64,
    pub hp: f64,
    pub volumes: VolumeSet,
    /// One per listed volume; a single representative ball for the interval case.
    pub minimizers: Vec<IsoSet>,
    /// `|κ − p·H(p)·V^{p−1}|`; `None` where the minimizer is `Ω` itself.
    pub curvature_residuals: Vec<Option<f64>>,
    /// The domain is a disk, so every `p > ½` shares the volume `πR²`.
    pub ball_degenerate: bool,
}

impl CheegerResult {
    /// The volume when the minimizer is unique.
    pub fn unique_volume(&self) -> Option<f64> {
        match self.volumes.points() {
            [v] => Some(*v),
            _ => None,
        }
    }

    /// Rows `p,Hp,volume,kappa,residual`, one per minimizer.
    pub fn csv_rows(&self, out: &mut String) {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
        match &self.volumes {
            VolumeSet::Interval { lo, hi } => {
                let k = self.minimizers.first().and_then(|m| m.kappa);
                let res = self.curvature_residuals.first().copied().flatten();
                let _ = writeln!(out, "{:?},{:?},({:?};{:?}],{},{}", self.p, self.hp, lo, hi, opt(k), opt(res));
            }
            VolumeSet::Points { .. } => {
                for (m, res) in self.minimizers.iter().zip(&self.curvature_residuals) {
                    let _ = writeln!(out, "{:?},{:?},{:?},{},{}", self.p, self.hp, m.volume, opt(m.kappa), opt(*res));
                }
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        self.csv_rows(&mut s);
        s
    }
}

pub const CSV_HEADER: &str = "p,Hp,volume,kappa,residual\n";

fn check_p(p: f64) -> Result<(), PCheegerError> {
    if p.is_finite() && p >= 0.5 {
        Ok(())
    } else {
        Err(PCheegerError::InvalidExponent(p))
    }
}

/// `I(V)/V^p`; the ball part `V < πR²` is admitted only at `p = ½`.
pub fn rayleigh(profile: &IsoProfile, v: f64, p: f64) -> Result<f64, PCheegerError> {
    check_p(p)?;
    let i = if p == 0.5 { profile.i_of_v_ball(v)? } else { profile.i_of_v(v)? };
    Ok(i / v.powf(p))
}

/// `|𝔎(V) − p·I(V)/V|`.
pub fn stationarity_residual(profile: &IsoProfile, p: f64, v: f64) -> Result<f64, PCheegerError> {
    check_p(p)?;
    let k = profile.kappa_of_v(v)?;
    let i = profile.i_of_v(v)?;
    Ok((k - p * i / v).abs())
}

/// Point of the profile where the quotient is evaluated.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Cand {
    Rolled(Sample),
    Volume(f64),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Eval {
    pub volume: f64,
    pub q: f64,
    pub cand: Cand,
}

fn quotient(s: &Sample, p: f64) -> f64 {
    s.perimeter / s.volume.powf(p)
}

/// Minimum of `I/V^p` near the scan index `i` of a piece, first by golden section and then
/// by a root of `1/r − p·P/V` when that brackets.
pub(crate) fn polish(
    profile: &IsoProfile,
    piece: &[Sample],
    i: usize,
    first_piece: bool,
    p: f64,
) -> Result<Eval, ProfileError> {
    let last = piece.len() - 1;
    let lo = if i == 0 {
        if first_piece {
            piece[0].r * 1e-3
        } else {
            piece[0].r
        }
    } else {
        piece[i - 1].r
    };
    let hi = piece[(i + 1).min(last)].r;
    let base = Eval { volume: piece[i].volume, q: quotient(&piece[i], p), cand: Cand::Rolled(piece[i]) };
    if hi <= lo {
        return Ok(base);
    }
    let q_of = |r: f64| profile.rolled_sample(r).map(|s| quotient(&s, p));
    let (rg, qg) = golden_min(q_of, lo, hi, 1e-12, 200)?;
    let mut best = if qg < base.q {
        let s = profile.rolled_sample(rg)?;
        Eval { volume: s.volume, q: qg, cand: Cand::Rolled(s) }
    } else {
        base
    };
    let g = |r: f64| profile.rolled_sample(r).map(|s| 1.0 / r - p * s.perimeter / s.volume);
    let (glo, ghi) = (g(lo)?, g(hi)?);
    if glo > 0.0 && ghi < 0.0 {
        let r = illinois(g, lo, hi, glo, ghi, 1e-15, 200)?;
        let s = profile.rolled_sample(r)?;
        let q = quotient(&s, p);
        if q <= best.q * (1.0 + 1e-12) {
            best = Eval { volume: s.volume, q, cand: Cand::Rolled(s) };
        }
    }
    Ok(best)
}

/// Quotient at flat endpoints, at the stationary point of the affine part, at `πR²` and at `Ω`.
pub(crate) fn fixed_candidates(profile: &IsoProfile, p: f64) -> Vec<Eval> {
    let mut out = Vec::new();
    let mut push = |volume: f64, perimeter: f64| {
        out.push(Eval { volume, q: perimeter / volume.powf(p), cand: Cand::Volume(volume) })
    };
    let mut rolled = Vec::new();
    for f in profile.flats() {
        match f.kind {
            FlatKind::Plateau => rolled.push(f.lower),
            FlatKind::Stadium { .. } => push(f.lower.volume, f.lower.perimeter),
        }
        rolled.push(f.upper);
        if p != 1.0 {
            let a = f.lower.perimeter - f.kappa * f.lower.volume;
            let v = p * a / (f.kappa * (1.0 - p));
            if v > f.lower.volume && v < f.upper.volume {
                push(v, f.perimeter_at(v));
            }
        }
    }
    let big_r = profile.inradius();
    push(PI * big_r * big_r, 2.0 * PI * big_r);
    let d = profile.domain();
    push(d.area(), d.perimeter());
    out.extend(rolled.into_iter().map(|s| Eval { volume: s.volume, q: quotient(&s, p), cand: Cand::Rolled(s) }));
    out
}

/// Indices of discrete local minima of `q` on a piece.
pub(crate) fn discrete_minima(q: &[f64]) -> Vec<usize> {
    let n = q.len();
    (0..n).filter(|&i| (i == 0 || q[i] <= q[i - 1]) && (i + 1 == n || q[i] <= q[i + 1])).collect()
}

/// All polished local minima, at most `limit` of the best coarse ones per piece order.
pub(crate) fn local_minima(
    profile: &IsoProfile,
    p: f64,
    coarse_window: Option<f64>,
    limit: usize,
) -> Result<Vec<Eval>, ProfileError> {
    let scan = profile.scan();
    let mut coarse: Vec<(usize, usize, f64)> = Vec::new();
    for (k, range) in profile.pieces().iter().enumerate() {
        let piece = &scan[range.clone()];
        let q: Vec<f64> = piece.iter().map(|s| quotient(s, p)).collect();
        coarse.extend(discrete_minima(&q).into_iter().map(|i| (k, i, q[i])));
    }
    let fixed = fixed_candidates(profile, p);
    let floor = coarse.iter().map(|c| c.2).chain(fixed.iter().map(|e| e.q)).fold(f64::INFINITY, f64::min);
    if let Some(w) = coarse_window {
        coarse.retain(|c| c.2 <= floor * (1.0 + w));
    }
    coarse.sort_by(|a, b| a.2.total_cmp(&b.2));
    coarse.truncate(limit);
    let mut evals = fixed;
    for (k, i, _) in coarse {
        let range = profile.pieces()[k].clone();
        evals.push(polish(profile, &scan[range.clone()], i, range.start == 0, p)?);
    }
    evals.sort_by(|a, b| a.volume.total_cmp(&b.volume));
    let merge = 1e-10 * profile.domain().area();
    let mut merged: Vec<Eval> = Vec::with_capacity(evals.len());
    for e in evals {
        match merged.last_mut() {
            Some(m) if e.volume - m.volume <= merge => {
                if e.q < m.q {
                    *m = e;
                }
            }
            _ => merged.push(e),
        }
    }
    Ok(merged)
}

fn iso_set(profile: &IsoProfile, cand: Cand) -> Result<IsoSet, ProfileError> {
    match cand {
        Cand::Rolled(s) => {
            let set = profile.rolled_set(s.r)?;
            Ok(IsoSet {
                volume: s.volume,
                perimeter: s.perimeter,
                kappa: Some(1.0 / s.r),
                region: set.region,
                exact: true,
                ball: false,
            })
        }
        Cand::Volume(v) => {
            if let Ok(Locus::Rolled(s)) = profile.locate(v) {
                return iso_set(profile, Cand::Rolled(s));
            }
            profile.isoperimetric_set(v, false)
        }
    }
}

fn residual(p: f64, hp: f64, m: &IsoSet) -> Option<f64> {
    m.kappa.map(|k| (k - p * hp * m.volume.powf(p - 1.0)).abs())
}

/// `H(p)` with every global minimizer of `I(V)/V^p` on `[πR², |Ω|]`.
pub fn solve_h(profile: &IsoProfile, p: f64) -> Result<CheegerResult, PCheegerError> {
    check_p(p)?;
    let big_r = profile.inradius();
    let vb = PI * big_r * big_r;
    if p == 0.5 || profile.is_ball() {
        let ball = profile.is_ball();
        let hp = 2.0 * PI.powf(1.0 - p) * big_r.powf(1.0 - 2.0 * p);
        let m = if ball && p > 0.5 {
            profile.isoperimetric_set(profile.domain().area(), false)?
        } else {
            let center = profile.domain().inradius().witnesses()[0];
            IsoSet {
                volume: vb,
                perimeter: 2.0 * PI * big_r,
                kappa: Some(1.0 / big_r),
                region: ArcRegion::single(crate::geometry::ArcPolygon::circle(center, big_r)),
                exact: true,
                ball: true,
            }
        };
        let volumes = if p == 0.5 {
            VolumeSet::Interval { lo: 0.0, hi: vb }
        } else {
            VolumeSet::Points { values: vec![m.volume] }
        };
        let res = residual(p, hp, &m);
        return Ok(CheegerResult {
            p,
            hp,
            volumes,
            minimizers: vec![m],
            curvature_residuals: vec![res],
            ball_degenerate: ball,
        });
    }

    let evals = local_minima(profile, p, Some(1e-3), 32)?;
    let hp = evals.iter().map(|e| e.q).fold(f64::INFINITY, f64::min);
    let mut minimizers = Vec::new();
    for e in evals.iter().filter(|e| e.q <= hp * (1.0 + TOL_MIN)) {
        minimizers.push(iso_set(profile, e.cand)?);
    }
    let values = minimizers.iter().map(|m| m.volume).collect();
    let curvature_residuals = minimizers.iter().map(|m| residual(p, hp, m)).collect();
    Ok(CheegerResult {
        p,
        hp,
        volumes: VolumeSet::Points { values },
        minimizers,
        curvature_residuals,
        ball_degenerate: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureEntry {
    pub volume: f64,
    pub kappa: Option<f64>,
    pub lower: f64,
    pub upper: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureCheck {
    pub pass: bool,
    pub entries: Vec<CurvatureEntry>,
}

/// Checks `max{pH(1), 1/R} ≤ κ < H(1)` for `p ∈ (½, 1)`, `κ = H(1)` at `p = 1` and
/// `κ ≥ pH(1)` for `p > 1`, each to relative `1e-9`.
pub fn curvature_bounds_check(result: &CheegerResult, profile: &IsoProfile) -> CurvatureCheck {
    let tol = 1e-9;
    let h1 = profile.h1();
    let p = result.p;
    let inv_r = 1.0 / profile.inradius();
    let entries: Vec<CurvatureEntry> = result
        .minimizers
        .iter()
        .map(|m| {
            let (lower, upper) = if p <= 0.5 {
                (inv_r, Some(inv_r))
            } else if p < 1.0 {
                ((p * h1).max(inv_r), Some(h1))
            } else if p == 1.0 {
                (h1, Some(h1))
            } else {
                (p * h1, None)
            };
            let pass = match m.kappa {
                None => true,
                Some(k) => k >= lower * (1.0 - tol) && upper.is_none_or(|u| k <= u * (1.0 + tol)),
            };
            CurvatureEntry { volume: m.volume, kappa: m.kappa, lower, upper, pass }
        })
        .collect();
    CurvatureCheck { pass: entries.iter().all(|e| e.pass), entries }
}
