//! The rolled-set family `r ↦ E_r` and the quantities read from it: `F(κ)`, `I(V)`, `𝔎(V)`,
//! `H(1)`, the Cheeger volumes and `κ̄`.

mod flats;

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{no_neck_check, ArcPolygon, ArcRegion, Domain, GeometryError, NoNeckReport, Point, RolledSet};
use crate::scalar::{geomspace, illinois};

pub use flats::plateau_radii;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("domain has a neck: erosion disconnected at r = {radius}")]
    NeckDetected { radius: f64, report: NoNeckReport },
    #[error("profile is empty")]
    EmptyProfile,
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("curvature {kappa} is below 1/R = {min}")]
    KappaBelowInverseInradius { kappa: f64, min: f64 },
    #[error("volume {volume} outside [{lo}, {hi}]")]
    VolumeOutOfRange { volume: f64, lo: f64, hi: f64 },
    #[error("rolled family is not monotone near r = {0}")]
    NonMonotone(f64),
}

/// Sampling and tolerance parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileOptions {
    pub n_r: usize,
    pub scan_samples: usize,
    pub neck_samples: usize,
    pub allow_necks: bool,
    pub tol_froot: f64,
    pub tol_kflat: f64,
    /// Relative to `|Ω|`.
    pub tol_conv: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            n_r: 512,
            scan_samples: 4096,
            neck_samples: 256,
            allow_necks: false,
            tol_froot: 1e-10,
            tol_kflat: 1e-8,
            tol_conv: 1e-7,
        }
    }
}

/// One rolled set: `(r, κ = 1/r, |E_r|, P(E_r), P − κ|E_r|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub r: f64,
    pub kappa: f64,
    pub volume: f64,
    pub perimeter: f64,
    pub f_value: f64,
}

impl ProfilePoint {
    pub fn new(r: f64, volume: f64, perimeter: f64) -> Self {
        let kappa = 1.0 / r;
        ProfilePoint { r, kappa, volume, perimeter, f_value: perimeter - kappa * volume }
    }
}

/// Measured rolled set without geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub r: f64,
    pub volume: f64,
    pub perimeter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatKind {
    /// Disk of radius `R` rolled along the kernel segment `[a, b]`.
    Stadium { a: Point, b: Point, heuristic: bool },
    /// Jump of the rolled family at a radius where facing parallel edges release a strip.
    Plateau,
}

/// Volume interval on which `𝔎` is constant and `I` is affine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flat {
    pub radius: f64,
    pub kappa: f64,
    pub lower: Sample,
    pub upper: Sample,
    pub kind: FlatKind,
}

impl Flat {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower.volume && v <= self.upper.volume
    }

    pub fn perimeter_at(&self, v: f64) -> f64 {
        self.lower.perimeter + self.kappa * (v - self.lower.volume)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBar {
    Finite(f64),
    Infinite,
}

impl fmt::Display for KappaBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaBar::Finite(k) => write!(f, "{k}"),
            KappaBar::Infinite => f.write_str("inf"),
        }
    }
}

/// Where a volume sits on the profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Locus {
    BelowInball,
    Flat(usize),
    Rolled(Sample),
    Whole,
}

/// Isoperimetric value with its minimizer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoSet {
    pub volume: f64,
    pub perimeter: f64,
    /// `None` at `V = |Ω|`, where `𝔎` is not defined.
    pub kappa: Option<f64>,
    pub region: ArcRegion,
    /// False when the set on a plateau is represented by the nearest rolled set.
    pub exact: bool,
    /// Ball regime `V < πR²`.
    pub ball: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Zero,
    Negative,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignProbe {
    pub p: f64,
    pub volume: f64,
    pub value: f64,
    pub sign: Sign,
    /// Set when the expression is negative: stationarity of `κV^{1−p}` cannot be excluded.
    pub stationarity_possible: bool,
}

/// Profile summary for reports.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileSummary {
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub ball: bool,
    pub h1: f64,
    pub h1_radius: f64,
    pub m_vol: f64,
    pub big_m_vol: f64,
    pub flatness: f64,
    pub kappa_bar: KappaBar,
    pub flats: Vec<Flat>,
    pub no_neck: NoNeckReport,
    pub points: usize,
}

/// Offset used to evaluate the one-sided limits at a plateau radius.
pub(crate) const PLATEAU_DELTA: f64 = 1e-6;
const R_MIN_FRACTION: f64 = 1e-5;
/// Smallest radius, relative to `R`, sampled when looking for `κ̄`.
const KAPPA_BAR_R_MIN: f64 = 1e-3;

/// Rolled-set family of a domain, immutable after construction.
#[derive(Clone, Debug)]
pub struct IsoProfile {
    domain: Domain,
    options: ProfileOptions,
    points: Vec<ProfilePoint>,
    scan: Vec<Sample>,
    pieces: Vec<std::ops::Range<usize>>,
    flats: Vec<Flat>,
    ball: bool,
    h1: f64,
    h1_radius: f64,
    m_vol: f64,
    big_m_vol: f64,
    flatness: f64,
    kappa_bar: KappaBar,
    neck: NoNeckReport,
}

fn sample(domain: &Domain, r: f64) -> Result<Sample, GeometryError> {
    let (volume, perimeter) = domain.rolled_measure(r)?;
    Ok(Sample { r, volume, perimeter })
}

fn samples(domain: &Domain, radii: &[f64]) -> Result<Vec<Sample>, GeometryError> {
    radii.par_iter().map(|&r| sample(domain, r)).collect()
}

impl IsoProfile {
    pub fn build(domain: Domain, options: ProfileOptions) -> Result<Self, ProfileError> {
        let neck = no_neck_check(&domain, options.neck_samples)?;
        if !neck.passes && !options.allow_necks {
            return Err(ProfileError::NeckDetected { radius: neck.failing_radius.unwrap_or(f64::NAN), report: neck });
        }
        if domain.is_disk() {
            return Ok(Self::ball(domain, options, neck));
        }
        let big_r = domain.inradius().radius;
        let area = domain.area();

        // plateaus of the rolled family
        let mut flats = Vec::new();
        if let Some(poly) = domain.as_polygon() {
            for rs in plateau_radii(poly, big_r) {
                let hi = sample(&domain, rs * (1.0 - PLATEAU_DELTA))?;
                let lo = sample(&domain, rs * (1.0 + PLATEAU_DELTA))?;
                if hi.volume - lo.volume > 1e-7 * area {
                    flats.push(Flat { radius: rs, kappa: 1.0 / rs, lower: lo, upper: hi, kind: FlatKind::Plateau });
                }
            }
        }

        let r_min = R_MIN_FRACTION * big_r;
        let mut radii = geomspace(r_min, big_r * (1.0 - 1e-9), options.scan_samples.max(16) - 1);
        radii.retain(|&r| flats.iter().all(|f| (r - f.radius).abs() > 2.0 * PLATEAU_DELTA * f.radius));
        for f in &flats {
            radii.push(f.lower.r);
            radii.push(f.upper.r);
        }
        radii.push(big_r);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let scan = samples(&domain, &radii)?;

        let mut pieces = Vec::new();
        let mut start = 0;
        for (k, w) in scan.windows(2).enumerate() {
            let split = flats.iter().any(|f| w[0].r == f.upper.r && w[1].r == f.lower.r);
            if split {
                pieces.push(start..k + 1);
                start = k + 1;
            }
        }
        pieces.push(start..scan.len());
        for w in scan.windows(2) {
            if w[1].volume > w[0].volume + 1e-9 * area {
                return Err(ProfileError::NonMonotone(w[0].r));
            }
        }

        let stadium_top = scan[scan.len() - 1];
        if let Some((a, b)) = domain.inradius().segment_kernel() {
            let ball_sample = Sample { r: big_r, volume: PI * big_r * big_r, perimeter: 2.0 * PI * big_r };
            if stadium_top.volume - ball_sample.volume > 1e-12 * area {
                flats.push(Flat {
                    radius: big_r,
                    kappa: 1.0 / big_r,
                    lower: ball_sample,
                    upper: stadium_top,
                    kind: FlatKind::Stadium { a, b, heuristic: domain.inradius().kernel.len() > 1 },
                });
            }
        }

        let mut prof = IsoProfile {
            domain,
            options,
            points: Vec::new(),
            scan,
            pieces,
            flats,
            ball: false,
            h1: f64::NAN,
            h1_radius: f64::NAN,
            m_vol: f64::NAN,
            big_m_vol: f64::NAN,
            flatness: f64::NAN,
            kappa_bar: KappaBar::Infinite,
            neck,
        };
        prof.solve_h1()?;
        prof.build_points()?;
        prof.kappa_bar = prof.kappa_bar_with_tol(crate::geometry::EPS_GEOM * area)?;
        Ok(prof)
    }

    fn ball(domain: Domain, options: ProfileOptions, neck: NoNeckReport) -> Self {
        let big_r = domain.inradius().radius;
        let (a, p) = (domain.area(), domain.perimeter());
        let points = geomspace(R_MIN_FRACTION * big_r, big_r, options.n_r.max(2))
            .into_iter()
            .map(|r| ProfilePoint::new(r, a, p))
            .collect();
        IsoProfile {
            options,
            points,
            scan: Vec::new(),
            pieces: Vec::new(),
            flats: Vec::new(),
            ball: true,
            h1: p / a,
            h1_radius: a / p,
            m_vol: a,
            big_m_vol: a,
            flatness: 0.0,
            kappa_bar: KappaBar::Finite(1.0 / big_r),
            neck,
            domain,
        }
    }

    fn f_at_radius(&self, r: f64) -> Result<f64, GeometryError> {
        let s = sample(&self.domain, r)?;
        Ok(s.perimeter - s.volume / r)
    }

    fn solve_h1(&mut self) -> Result<(), ProfileError> {
        let f = |s: &Sample| s.perimeter - s.volume / s.r;
        let k = self
            .scan
            .iter()
            .position(|s| f(s) >= 0.0)
            .ok_or_else(|| ProfileError::RootNotBracketed("F(1/r) < 0 on all of (0, R]".into()))?;
        let (a, fa, b, fb) = if k == 0 {
            let lo = self.scan[0].r * 1e-3;
            let flo = self.f_at_radius(lo)?;
            if flo >= 0.0 {
                return Err(ProfileError::RootNotBracketed("F(1/r) >= 0 at the smallest radius".into()));
            }
            (lo, flo, self.scan[0].r, f(&self.scan[0]))
        } else {
            (self.scan[k - 1].r, f(&self.scan[k - 1]), self.scan[k].r, f(&self.scan[k]))
        };
        let tol = self.options.tol_froot.min(1e-13);
        let r = illinois(|r| self.f_at_radius(r), a, b, fa, fb, tol, 200)?;
        let on_flat = self.flats.iter().find(|fl| {
            matches!(fl.kind, FlatKind::Plateau)
                && (r - fl.radius).abs() <= (self.options.tol_kflat + 2.0 * PLATEAU_DELTA) * fl.radius
        });
        match on_flat {
            Some(fl) => {
                self.h1_radius = fl.radius;
                self.m_vol = fl.lower.volume;
                self.big_m_vol = fl.upper.volume;
                self.flatness = 0.0;
            }
            None => {
                let s = sample(&self.domain, r)?;
                self.h1_radius = r;
                self.m_vol = s.volume;
                self.big_m_vol = s.volume;
                // slope of I on either side of the Cheeger volume, compared with H(1)
                let dr = 1e-6 * r;
                let lo = sample(&self.domain, r + dr)?;
                let hi = sample(&self.domain, (r - dr).max(r * 0.5))?;
                let left = (s.perimeter - lo.perimeter) / (s.volume - lo.volume);
                let right = (hi.perimeter - s.perimeter) / (hi.volume - s.volume);
                self.flatness = (left - 1.0 / r).abs().max((right - 1.0 / r).abs());
            }
        }
        self.h1 = 1.0 / self.h1_radius;
        Ok(())
    }

    fn build_points(&mut self) -> Result<(), ProfileError> {
        let big_r = self.inradius();
        let n_r = self.options.n_r.max(40);
        let refine = 16;
        let mut radii = geomspace(R_MIN_FRACTION * big_r, big_r * (1.0 - 1e-6), n_r - 2 * refine - 1);
        radii.extend((0..refine).map(|k| big_r * (1.0 - 0.1 * 1e-5f64.powf(k as f64 / (refine - 1) as f64))));
        let rh = self.h1_radius;
        radii.extend(
            (0..refine)
                .map(|k| rh * (1.0 + 0.02 * (2.0 * k as f64 / (refine - 1) as f64 - 1.0)))
                .filter(|&r| r < big_r),
        );
        radii.push(big_r);
        radii.retain(|&r| {
            self.flats.iter().all(|f| (r - f.radius).abs() > 2.0 * PLATEAU_DELTA * f.radius || r == big_r)
        });
        radii.sort_by(|a, b| b.total_cmp(a));
        radii.dedup();
        let s = samples(&self.domain, &radii)?;
        let mut pts: Vec<ProfilePoint> = s.iter().map(|s| ProfilePoint::new(s.r, s.volume, s.perimeter)).collect();
        pts.dedup_by(|b, a| b.volume <= a.volume);
        if pts.is_empty() {
            return Err(ProfileError::EmptyProfile);
        }
        self.points = pts;
        Ok(())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn options(&self) -> &ProfileOptions {
        &self.options
    }

    /// Rolled-set samples sorted by volume.
    pub fn points(&self) -> &[ProfilePoint] {
        &self.points
    }

    /// Dense scan, ascending in `r`.
    pub fn scan(&self) -> &[Sample] {
        &self.scan
    }

    /// Index ranges of the scan on which `r ↦ E_r` is continuous.
    pub fn pieces(&self) -> &[std::ops::Range<usize>] {
        &self.pieces
    }

    /// Plateaus and the stadium branch, ascending in radius.
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn stadium(&self) -> Option<&Flat> {
        self.flats.iter().find(|f| matches!(f.kind, FlatKind::Stadium { .. }))
    }

    pub fn is_ball(&self) -> bool {
        self.ball
    }

    pub fn inradius(&self) -> f64 {
        self.domain.inradius().radius
    }

    pub fn inball_volume(&self) -> f64 {
        let r = self.inradius();
        PI * r * r
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h1_radius(&self) -> f64 {
        self.h1_radius
    }

    /// `(m(Ω), M(Ω))`.
    pub fn mm_volumes(&self) -> (f64, f64) {
        (self.m_vol, self.big_m_vol)
    }

    /// Largest deviation of the one-sided slopes of `I` from `H(1)` at the Cheeger volume.
    pub fn flatness(&self) -> f64 {
        self.flatness
    }

    pub fn neck_report(&self) -> &NoNeckReport {
        &self.neck
    }

    pub fn kappa_bar(&self) -> KappaBar {
        self.kappa_bar
    }

    pub fn rolled_sample(&self, r: f64) -> Result<Sample, ProfileError> {
        Ok(sample(&self.domain, r)?)
    }

    pub fn rolled_set(&self, r: f64) -> Result<RolledSet, ProfileError> {
        Ok(self.domain.rolled_set(r)?)
    }

    /// `F(κ)` with the maximal minimizer `E_{1/κ}`.
    pub fn f_of_kappa(&self, kappa: f64) -> Result<(f64, RolledSet), ProfileError> {
        let min = 1.0 / self.inradius();
        if kappa.is_nan() || kappa < min * (1.0 - 1e-12) {
            return Err(ProfileError::KappaBelowInverseInradius { kappa, min });
        }
        let r = (1.0 / kappa).min(self.inradius());
        let set = self.domain.rolled_set(r)?;
        Ok((set.perimeter - kappa * set.volume, set))
    }

    /// `F(κ)` without building the minimizer.
    pub fn f_value(&self, kappa: f64) -> Result<f64, ProfileError> {
        let min = 1.0 / self.inradius();
        if kappa.is_nan() || kappa < min * (1.0 - 1e-12) {
            return Err(ProfileError::KappaBelowInverseInradius { kappa, min });
        }
        let s = sample(&self.domain, (1.0 / kappa).min(self.inradius()))?;
        Ok(s.perimeter - kappa * s.volume)
    }

    pub fn cheeger_set(&self) -> Result<RolledSet, ProfileError> {
        self.rolled_set(self.h1_radius)
    }

    fn out_of_range(&self, volume: f64) -> ProfileError {
        ProfileError::VolumeOutOfRange { volume, lo: self.inball_volume(), hi: self.domain.area() }
    }

    /// Classifies `V` and, on the rolled branch, solves `|E_r| = V`.
    pub fn locate(&self, v: f64) -> Result<Locus, ProfileError> {
        let area = self.domain.area();
        let vb = self.inball_volume();
        let tol = 1e-13 * area;
        if !v.is_finite() || v > area + tol || v <= 0.0 {
            return Err(self.out_of_range(v));
        }
        if v >= area {
            return Ok(Locus::Whole);
        }
        if self.ball {
            return if v < vb - tol { Ok(Locus::BelowInball) } else { Ok(Locus::Whole) };
        }
        if v < vb - tol {
            return Ok(Locus::BelowInball);
        }
        if let Some(i) = self.flats.iter().position(|f| f.contains(v)) {
            return Ok(Locus::Flat(i));
        }
        if v <= vb + tol {
            // inball volume up to rounding, with a point kernel
            let top = self.scan[self.scan.len() - 1];
            return Ok(Locus::Rolled(top));
        }
        for piece in &self.pieces {
            let s = &self.scan[piece.clone()];
            let (first, last) = (s[0], s[s.len() - 1]);
            if v > first.volume && piece.start == 0 {
                // between the smallest sampled radius and Ω itself
                let top = sample(&self.domain, first.r * 1e-6)?;
                if v >= top.volume {
                    return Ok(Locus::Rolled(top));
                }
                return self.solve_rolled(top, first, v);
            }
            if v <= first.volume && v >= last.volume {
                // samples are descending in volume
                let k = s.partition_point(|x| x.volume > v);
                if k < s.len() && s[k].volume == v {
                    return Ok(Locus::Rolled(s[k]));
                }
                let k = k.clamp(1, s.len() - 1);
                return self.solve_rolled(s[k - 1], s[k], v);
            }
        }
        Err(self.out_of_range(v))
    }

    fn solve_rolled(&self, small_r: Sample, big_r: Sample, v: f64) -> Result<Locus, ProfileError> {
        let f = |r: f64| sample(&self.domain, r).map(|s| s.volume - v);
        let r = illinois(f, small_r.r, big_r.r, small_r.volume - v, big_r.volume - v, 1e-15, 200)?;
        Ok(Locus::Rolled(sample(&self.domain, r)?))
    }

    /// `𝔎(V)` on `[πR², |Ω|)`.
    pub fn kappa_of_v(&self, v: f64) -> Result<f64, ProfileError> {
        match self.locate(v)? {
            Locus::Flat(i) => Ok(self.flats[i].kappa),
            Locus::Rolled(s) => Ok(1.0 / s.r),
            Locus::BelowInball | Locus::Whole => Err(self.out_of_range(v)),
        }
    }

    /// `I(V)` on `[πR², |Ω|]`.
    pub fn i_of_v(&self, v: f64) -> Result<f64, ProfileError> {
        match self.locate(v)? {
            Locus::Flat(i) => Ok(self.flats[i].perimeter_at(v)),
            Locus::Rolled(s) => Ok(s.perimeter),
            Locus::Whole => Ok(self.domain.perimeter()),
            Locus::BelowInball => Err(self.out_of_range(v)),
        }
    }

    /// `I(V)` extended to `V < πR²` by the ball value `2√(πV)`.
    pub fn i_of_v_ball(&self, v: f64) -> Result<f64, ProfileError> {
        match self.locate(v)? {
            Locus::BelowInball => Ok(2.0 * (PI * v).sqrt()),
            _ => self.i_of_v(v),
        }
    }

    /// Isoperimetric set of volume `V`; with `allow_ball`, volumes below `πR²` give a ball.
    pub fn isoperimetric_set(&self, v: f64, allow_ball: bool) -> Result<IsoSet, ProfileError> {
        let center = self.domain.inradius().witnesses()[0];
        match self.locate(v)? {
            Locus::BelowInball if allow_ball => {
                let rho = (v / PI).sqrt();
                Ok(IsoSet {
                    volume: v,
                    perimeter: 2.0 * PI * rho,
                    kappa: Some(1.0 / rho),
                    region: ArcRegion::single(ArcPolygon::circle(center, rho)),
                    exact: true,
                    ball: true,
                })
            }
            Locus::BelowInball => Err(self.out_of_range(v)),
            Locus::Whole => Ok(IsoSet {
                volume: self.domain.area(),
                perimeter: self.domain.perimeter(),
                kappa: None,
                region: self.domain.region(),
                exact: true,
                ball: false,
            }),
            Locus::Rolled(s) => Ok(IsoSet {
                volume: s.volume,
                perimeter: s.perimeter,
                kappa: Some(1.0 / s.r),
                region: self.domain.rolled_set(s.r)?.region,
                exact: true,
                ball: false,
            }),
            Locus::Flat(i) => {
                let f = &self.flats[i];
                let perimeter = f.perimeter_at(v);
                let (region, exact) = match &f.kind {
                    FlatKind::Stadium { a, b, heuristic } => {
                        let len = a.dist(*b);
                        let l = ((v - f.lower.volume) / (2.0 * f.radius)).clamp(0.0, len);
                        let end = *a + (*b - *a) * (l / len);
                        (ArcRegion::single(ArcPolygon::stadium(*a, end, f.radius)), !heuristic)
                    }
                    FlatKind::Plateau => {
                        let near = if v - f.lower.volume < f.upper.volume - v { f.lower } else { f.upper };
                        (self.domain.rolled_set(near.r)?.region, false)
                    }
                };
                Ok(IsoSet { volume: v, perimeter, kappa: Some(f.kappa), region, exact, ball: false })
            }
        }
    }

    /// Smallest curvature at which the rolled set equals `Ω` up to area `tol_area`.
    pub fn kappa_bar_with_tol(&self, tol_area: f64) -> Result<KappaBar, ProfileError> {
        if self.ball {
            return Ok(KappaBar::Finite(1.0 / self.inradius()));
        }
        let area = self.domain.area();
        let deficit = |s: &Sample| area - s.volume;
        let r_floor = KAPPA_BAR_R_MIN * self.inradius();
        let Some(k) = self.scan.iter().rposition(|s| s.r >= r_floor && deficit(s) < tol_area) else {
            return Ok(KappaBar::Infinite);
        };
        if k + 1 == self.scan.len() {
            return Ok(KappaBar::Finite(1.0 / self.scan[k].r));
        }
        let (a, b) = (self.scan[k], self.scan[k + 1]);
        let g = |r: f64| sample(&self.domain, r).map(|s| area - s.volume - tol_area);
        let r = illinois(g, a.r, b.r, deficit(&a) - tol_area, deficit(&b) - tol_area, 1e-12, 100)?;
        Ok(KappaBar::Finite(1.0 / r))
    }

    /// `|(I(V+h) − I(V−h))/(2h) − 𝔎(V)|`.
    pub fn derivative_check(&self, v: f64, h: f64) -> Result<f64, ProfileError> {
        let k = self.kappa_of_v(v)?;
        let d = (self.i_of_v(v + h)? - self.i_of_v(v - h)?) / (2.0 * h);
        Ok((d - k).abs())
    }

    /// Sign of `(I″(V)·V + (1−p)·I′(V)) / V^p`, with `I″` from central second differences.
    pub fn supercritical_sign_probe(&self, p: f64, v: f64) -> Result<SignProbe, ProfileError> {
        if self.ball {
            return Ok(SignProbe {
                p,
                volume: v,
                value: f64::NAN,
                sign: Sign::NotApplicable,
                stationarity_possible: false,
            });
        }
        let (lo, hi) = (self.inball_volume(), self.domain.area());
        if !(v > lo && v < hi) {
            return Err(self.out_of_range(v));
        }
        let h = (1e-4 * (hi - lo)).min(0.5 * (v - lo)).min(0.5 * (hi - v));
        let i0 = self.i_of_v(v)?;
        let i2 = (self.i_of_v(v + h)? - 2.0 * i0 + self.i_of_v(v - h)?) / (h * h);
        let i1 = self.kappa_of_v(v)?;
        let value = (i2 * v + (1.0 - p) * i1) / v.powf(p);
        let noise = 4.0 * f64::EPSILON * i0 / (h * h) * v / v.powf(p);
        let sign = if value > noise {
            Sign::Positive
        } else if value < -noise {
            Sign::Negative
        } else {
            Sign::Zero
        };
        Ok(SignProbe { p, volume: v, value, sign, stationarity_possible: sign == Sign::Negative })
    }

    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            area: self.domain.area(),
            perimeter: self.domain.perimeter(),
            inradius: self.inradius(),
            ball: self.ball,
            h1: self.h1,
            h1_radius: self.h1_radius,
            m_vol: self.m_vol,
            big_m_vol: self.big_m_vol,
            flatness: self.flatness,
            kappa_bar: self.kappa_bar,
            flats: self.flats.clone(),
            no_neck: self.neck.clone(),
            points: self.points.len(),
        }
    }

    /// CSV with header `r,kappa,volume,perimeter,F`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,kappa,volume,perimeter,F\n");
        for p in &self.points {
            let _ = writeln!(s, "{:?},{:?},{:?},{:?},{:?}", p.r, p.kappa, p.volume, p.perimeter, p.f_value);
        }
        s
    }
}
