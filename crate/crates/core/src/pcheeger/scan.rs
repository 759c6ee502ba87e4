//! Scans of `𝔙` over a p-grid and the supercritical multivaluedness probe.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{local_minima, solve_h, CheegerResult, PCheegerError, CSV_HEADER, P_MAX, TOL_MIN};
use crate::geometry::EPS_GEOM;
use crate::profile::IsoProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Disk input: all volumes coincide by construction.
    BallDegenerate,
    /// Too few comparable grid points.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::BallDegenerate => "ball_degenerate",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub p: [f64; 2],
    pub volumes: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn of(status: Status) -> Self {
        Verdict { status, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Verdict { status: Status::Fail, witness: Some(w) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PBar {
    Finite(f64),
    Infinite,
}

impl fmt::Display for PBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PBar::Finite(p) => write!(f, "{p}"),
            PBar::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VMapScan {
    pub p_grid: Vec<f64>,
    pub results: Vec<CheegerResult>,
    /// Strict increase of the unique volumes on `(½, 1)`.
    pub monotonicity: Verdict,
    /// Pairwise disjoint volume sets across the grid.
    pub injectivity: Verdict,
    /// Largest volume jump must shrink by about half when the grid is refined by midpoints.
    pub continuity: Verdict,
    pub coarse_jump: f64,
    pub fine_jump: f64,
    pub p_bar: PBar,
}

impl VMapScan {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        for r in &self.results {
            r.csv_rows(&mut s);
        }
        s
    }
}

/// Allowed excess of the refined jump over half the coarse jump.
const CONTINUITY_SLACK: f64 = 0.1;

fn solve_all(profile: &IsoProfile, grid: &[f64]) -> Result<Vec<CheegerResult>, PCheegerError> {
    grid.par_iter().map(|&p| solve_h(profile, p)).collect()
}

fn max_jump(results: &[CheegerResult]) -> (f64, usize) {
    let mut best = (0.0, 0);
    for w in results.windows(2) {
        if let (Some(a), Some(b)) = (w[0].unique_volume(), w[1].unique_volume()) {
            best.0 = f64::max(best.0, (b - a).abs());
            best.1 += 1;
        }
    }
    best
}

/// Solves `H(p)` on the grid and judges monotonicity, injectivity and continuity of `𝔙`.
pub fn scan_v(profile: &IsoProfile, p_grid: &[f64]) -> Result<VMapScan, PCheegerError> {
    if p_grid.is_empty() {
        return Err(PCheegerError::InvalidGrid("empty".into()));
    }
    if p_grid.iter().any(|p| !(*p >= 0.5 && *p <= P_MAX)) {
        return Err(PCheegerError::InvalidGrid(format!("exponents must lie in [0.5, {P_MAX}]")));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PCheegerError::InvalidGrid("must be strictly increasing".into()));
    }
    let results = solve_all(profile, p_grid)?;
    let area = profile.domain().area();
    let ball = profile.is_ball();

    let monotonicity = if ball {
        Verdict::of(Status::BallDegenerate)
    } else {
        let sub: Vec<&CheegerResult> = results.iter().filter(|r| r.p > 0.5 && r.p < 1.0).collect();
        let mut v = Verdict::of(if sub.len() < 2 { Status::Inconclusive } else { Status::Pass });
        for w in sub.windows(2) {
            let (a, b) = (w[0].unique_volume(), w[1].unique_volume());
            let ok = matches!((a, b), (Some(a), Some(b)) if b > a);
            if !ok {
                let first = |r: &CheegerResult| r.volumes.points().first().copied().unwrap_or(f64::NAN);
                v = Verdict::fail(Witness { p: [w[0].p, w[1].p], volumes: [first(w[0]), first(w[1])] });
                break;
            }
        }
        v
    };

    let injectivity = if ball {
        Verdict::of(Status::BallDegenerate)
    } else {
        let tol = 1e-12 * area;
        let mut v = Verdict::of(Status::Pass);
        'outer: for i in 0..results.len() {
            for j in (i + 1)..results.len() {
                if let Some((a, b)) = overlap(&results[i], &results[j], tol) {
                    v = Verdict::fail(Witness { p: [results[i].p, results[j].p], volumes: [a, b] });
                    break 'outer;
                }
            }
        }
        v
    };

    let (continuity, coarse_jump, fine_jump) = if ball {
        (Verdict::of(Status::BallDegenerate), 0.0, 0.0)
    } else {
        let mids: Vec<f64> = p_grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let mid_results = solve_all(profile, &mids)?;
        let mut fine: Vec<CheegerResult> = Vec::with_capacity(results.len() + mid_results.len());
        for (k, r) in results.iter().enumerate() {
            fine.push(r.clone());
            if let Some(m) = mid_results.get(k) {
                fine.push(m.clone());
            }
        }
        let (j, n) = max_jump(&results);
        let (jf, _) = max_jump(&fine);
        let status = if n < 2 || j == 0.0 {
            Status::Inconclusive
        } else if jf <= 0.5 * j * (1.0 + CONTINUITY_SLACK) {
            Status::Pass
        } else {
            Status::Fail
        };
        (Verdict::of(status), j, jf)
    };

    let p_bar = results
        .iter()
        .find(|r| !ball && r.volumes.points().iter().any(|v| area - v < EPS_GEOM * area))
        .map_or(PBar::Infinite, |r| PBar::Finite(r.p));

    Ok(VMapScan {
        p_grid: p_grid.to_vec(),
        results,
        monotonicity,
        injectivity,
        continuity,
        coarse_jump,
        fine_jump,
        p_bar,
    })
}

/// A pair of coinciding volumes of two results, if any.
fn overlap(a: &CheegerResult, b: &CheegerResult, tol: f64) -> Option<(f64, f64)> {
    use super::VolumeSet::*;
    match (&a.volumes, &b.volumes) {
        (Interval { hi, .. }, Points { values }) | (Points { values }, Interval { hi, .. }) => {
            values.iter().find(|v| **v <= hi + tol).map(|v| (*hi, *v))
        }
        (Interval { hi, .. }, Interval { .. }) => Some((*hi, *hi)),
        (Points { values: x }, Points { values: y }) => {
            x.iter().flat_map(|u| y.iter().map(move |w| (*u, *w))).find(|(u, w)| (u - w).abs() <= tol)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalMin {
    pub volume: f64,
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultivalueReport {
    pub p: f64,
    pub hp: f64,
    /// Polished local minima of `I(V)/V^p`, by increasing volume.
    pub local_minima: Vec<LocalMin>,
    /// Volumes within `TOL_MIN` of the minimum.
    pub global_minimizers: Vec<f64>,
    /// Relative gap from the minimum to the best local minimum outside the global set.
    pub gap: Option<f64>,
}

/// Dense scan of `V ↦ I(V)/V^p` for `p > 1`.
pub fn multivalue_probe(profile: &IsoProfile, p: f64) -> Result<MultivalueReport, PCheegerError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(PCheegerError::InvalidExponent(p));
    }
    if profile.is_ball() {
        let r = solve_h(profile, p)?;
        let v = r.volumes.points()[0];
        return Ok(MultivalueReport {
            p,
            hp: r.hp,
            local_minima: vec![LocalMin { volume: v, quotient: r.hp }],
            global_minimizers: vec![v],
            gap: None,
        });
    }
    let evals = local_minima(profile, p, None, 256)?;
    // keep the interior local minima plus the best boundary value
    let hp = evals.iter().map(|e| e.q).fold(f64::INFINITY, f64::min);
    let mut local: Vec<LocalMin> = Vec::new();
    for (k, e) in evals.iter().enumerate() {
        let left = k.checked_sub(1).map_or(f64::INFINITY, |j| evals[j].q);
        let right = evals.get(k + 1).map_or(f64::INFINITY, |n| n.q);
        if e.q <= left && e.q <= right {
            local.push(LocalMin { volume: e.volume, quotient: e.q });
        }
    }
    let global_minimizers: Vec<f64> =
        local.iter().filter(|m| m.quotient <= hp * (1.0 + TOL_MIN)).map(|m| m.volume).collect();
    let gap = local
        .iter()
        .filter(|m| m.quotient > hp * (1.0 + TOL_MIN))
        .map(|m| (m.quotient - hp) / hp)
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))));
    Ok(MultivalueReport { p, hp, local_minima: local, global_minimizers, gap })
}
