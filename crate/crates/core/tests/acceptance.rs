//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use cheegerlab::geometry::{no_neck_check, Domain};
use cheegerlab::oracle::{min_cut_f, oracle_h1, oracle_i, rasterize, GridProblem, StencilKind};
use cheegerlab::pcheeger::{scan_v, solve_h, stationarity_residual};
use cheegerlab::profile::{IsoProfile, ProfileOptions, Sign};
use cheegerlab::scalar::geomspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const H1_PROFILE_REL: f64 = 1e-9;
const ORACLE_REL: f64 = 0.02;
const H1_SECONDS: f64 = 5.0;
const BALL_ABS: f64 = 1e-10;
const BALL_SECONDS: f64 = 1.0;
const VMAP_POINTS: usize = 49;
const VMAP_P: (f64, f64) = (0.501, 0.999);
const VMAP_ENDPOINT_ABS: f64 = 1e-3;
const VMAP_SECONDS: f64 = 30.0;
const TRICHOTOMY_P1_ABS: f64 = 1e-8;
const RANDOM_POLYGONS: usize = 20;
const RANDOM_SEED: u64 = 20_240_611;
const CURV_REL: f64 = 1e-8;
const F_PAIRS: usize = 100;
const SIGN_DELTA_REL: f64 = 1e-3;
const DUALITY_REL: f64 = 1e-10;
const ROUND_TRIP_REL: f64 = 1e-8;
const DERIV_ABS: f64 = 1e-6;
const DERIV_STEP_REL: f64 = 1e-7;
const EXHAUSTIVE_GRIDS: usize = 50;
const EXHAUSTIVE_MAX_PIXELS: usize = 18;
const EXHAUSTIVE_SECONDS: f64 = 60.0;
const CONVERGENCE_SECONDS: f64 = 120.0;
const PROBE_VOLUMES: usize = 64;
const NECK_DEVIATION: f64 = 0.05;
const P_SET: [f64; 7] = [0.6, 0.75, 0.9, 1.0, 1.5, 2.0, 3.0];

struct Line {
    pass: bool,
    name: &'static str,
    detail: String,
}

fn profile(d: Domain) -> IsoProfile {
    IsoProfile::build(d, ProfileOptions::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn cheeger_square() -> Line {
    let t = Instant::now();
    let prof = profile(common::square());
    let exact = 2.0 + PI.sqrt();
    let e_prof = rel(prof.h1(), exact);
    let (oracle, _) = oracle_h1(&common::square(), 1.0 / 256.0, StencilKind::N16).unwrap();
    let e_oracle = rel(oracle, exact);
    let secs = t.elapsed().as_secs_f64();
    Line {
        pass: e_prof <= H1_PROFILE_REL && e_oracle <= ORACLE_REL && secs < H1_SECONDS,
        name: "Cheeger constant, unit square",
        detail: format!("H1 {} rel {e_prof:.2e}; oracle {oracle} rel {e_oracle:.4}; {secs:.2}s", prof.h1()),
    }
}

fn ball() -> Line {
    let t = Instant::now();
    let prof = profile(common::disk());
    let mut worst: f64 = 0.0;
    for p in [0.5, 0.75, 1.0, 2.0] {
        let r = solve_h(&prof, p).unwrap();
        worst = worst.max((r.hp - 2.0 * PI.powf(1.0 - p)).abs());
    }
    let mut singleton = true;
    for p in [0.51, 0.6, 0.75, 0.9, 1.0, 1.5, 2.0, 4.0, 8.0] {
        let r = solve_h(&prof, p).unwrap();
        singleton &=
            r.volumes.points().len() == 1 && (r.volumes.points()[0] - PI).abs() <= BALL_ABS && r.ball_degenerate;
    }
    let secs = t.elapsed().as_secs_f64();
    Line {
        pass: worst <= BALL_ABS && singleton && secs < BALL_SECONDS,
        name: "Ball degeneracy",
        detail: format!("max |H(p) - 2pi^(1-p)| {worst:.2e}; V(p) = {{pi}}: {singleton}; {secs:.2}s"),
    }
}

fn vmap_square() -> Line {
    let t = Instant::now();
    let prof = profile(common::square());
    let (a, b) = VMAP_P;
    let grid: Vec<f64> = (0..VMAP_POINTS).map(|k| a + (b - a) * k as f64 / (VMAP_POINTS - 1) as f64).collect();
    let scan = scan_v(&prof, &grid).unwrap();
    let vols: Vec<f64> = scan.results.iter().map(|r| r.unique_volume().unwrap_or(f64::NAN)).collect();
    let increasing = vols.windows(2).all(|w| w[1] > w[0]);
    let (m, _) = prof.mm_volumes();
    let lo = (vols[0] - PI / 4.0).abs();
    let hi = (vols[VMAP_POINTS - 1] - m).abs();
    let secs = t.elapsed().as_secs_f64();
    let pass = increasing
        && lo <= VMAP_ENDPOINT_ABS
        && hi <= VMAP_ENDPOINT_ABS
        && scan.monotonicity.passed()
        && scan.injectivity.passed()
        && scan.continuity.passed()
        && secs < VMAP_SECONDS;
    Line {
        pass,
        name: "Volume map on (1/2, 1), unit square",
        detail: format!(
            "increasing {increasing}; endpoint gaps {lo:.2e}, {hi:.2e}; injectivity {:?}; continuity {:?} ({:.3e} -> {:.3e}); {secs:.2}s",
            scan.injectivity.status, scan.continuity.status, scan.coarse_jump, scan.fine_jump
        ),
    }
}

fn trichotomy() -> Line {
    let mut fails = Vec::new();
    for (name, d) in [("square", common::square()), ("rectangle", common::rectangle())] {
        let prof = profile(d);
        let ball = prof.inball_volume();
        let (m, big_m) = prof.mm_volumes();
        for p in [0.6, 0.8, 1.0, 1.5, 3.0] {
            let r = solve_h(&prof, p).unwrap();
            for &v in r.volumes.points() {
                let ok = if p < 1.0 {
                    v > ball && v < m
                } else if p == 1.0 {
                    (v - m).abs() <= TRICHOTOMY_P1_ABS || (v >= m && v <= big_m)
                } else {
                    v > big_m
                };
                if !ok {
                    fails.push(format!("{name} p={p} V={v}"));
                }
            }
        }
    }
    Line {
        pass: fails.is_empty(),
        name: "Range trichotomy",
        detail: if fails.is_empty() { "all sampled p".into() } else { fails.join("; ") },
    }
}

fn curvature_identity(profs: &[IsoProfile]) -> Line {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for prof in profs {
        let area = prof.domain().area();
        for p in P_SET {
            let r = solve_h(prof, p).unwrap();
            for m in &r.minimizers {
                let Some(k) = m.kappa else { continue };
                if area - m.volume <= 1e-12 * area {
                    continue;
                }
                let res = stationarity_residual(prof, p, m.volume).unwrap();
                worst = worst.max(res / k);
                count += 1;
            }
        }
    }
    Line {
        pass: worst < CURV_REL,
        name: "Curvature identity, random convex polygons",
        detail: format!("{count} minimizers; max residual/K {worst:.2e}"),
    }
}

fn f_properties(profs: &[IsoProfile]) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 1);
    let mut decreasing = true;
    let mut switch = true;
    for prof in profs {
        let lo = 1.0 / prof.inradius();
        for _ in 0..F_PAIRS {
            let a = rng.random_range(lo..20.0 * lo);
            let b = rng.random_range(lo..20.0 * lo);
            let (k1, k2) = if a > b { (a, b) } else { (b, a) };
            if k1 > k2 {
                decreasing &= prof.f_value(k1).unwrap() < prof.f_value(k2).unwrap();
            }
        }
        let h = prof.h1();
        let d = SIGN_DELTA_REL * h;
        switch &= prof.f_value(h - d).unwrap() > 0.0 && prof.f_value(h + d).unwrap() < 0.0;
    }
    Line {
        pass: decreasing && switch,
        name: "F strictly decreasing with sign switch at H1",
        detail: format!("{} polygons x {F_PAIRS} pairs: decreasing {decreasing}; sign switch {switch}", profs.len()),
    }
}

fn duality(profs: &[IsoProfile]) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 2);
    let mut worst_dual: f64 = 0.0;
    let mut worst_trip: f64 = 0.0;
    for prof in profs {
        for p in P_SET {
            for m in &solve_h(prof, p).unwrap().minimizers {
                let per = m.region.perimeter();
                worst_dual = worst_dual.max((per - prof.i_of_v(m.volume).unwrap()).abs() / per);
            }
        }
        let (lo, h1) = (1.0 / prof.inradius(), prof.h1());
        let mut trips = 0;
        while trips < 10 {
            let k = rng.random_range(lo * (1.0 + 1e-3)..20.0 * lo);
            if (k - h1).abs() <= 1e-3 * h1 || prof.flats().iter().any(|f| (k - f.kappa).abs() <= 1e-3 * f.kappa) {
                continue;
            }
            let (_, set) = prof.f_of_kappa(k).unwrap();
            worst_trip = worst_trip.max(rel(prof.kappa_of_v(set.volume).unwrap(), k));
            trips += 1;
        }
    }
    Line {
        pass: worst_dual <= DUALITY_REL && worst_trip <= ROUND_TRIP_REL,
        name: "Duality and curvature round trip",
        detail: format!("max |P - I(V)|/P {worst_dual:.2e}; max round-trip error {worst_trip:.2e}"),
    }
}

fn derivative(profs: &[IsoProfile]) -> Line {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut check = |prof: &IsoProfile, v: f64| {
        let h = DERIV_STEP_REL * prof.domain().area();
        worst = worst.max(prof.derivative_check(v, h).unwrap());
        checked += 1;
    };
    let named = [profile(common::square()), profile(common::rectangle()), profile(common::l_shape())];
    for prof in named.iter().chain(profs) {
        let big_r = prof.inradius();
        for k in 0..9 {
            let r = big_r * (0.1 + 0.85 * k as f64 / 8.0);
            let (v, _) = prof.domain().rolled_measure(r).unwrap();
            check(prof, v);
        }
        if let Some(f) = prof.stadium() {
            check(prof, 0.5 * (f.lower.volume + f.upper.volume));
        } else {
            let (m, _) = prof.mm_volumes();
            check(prof, 0.5 * (prof.inball_volume() + m));
        }
    }
    let stadium = named[1].stadium().is_some();
    Line {
        pass: worst < DERIV_ABS && stadium,
        name: "K equals I'",
        detail: format!("{checked} volumes (rectangle stadium branch included: {stadium}); max residual {worst:.2e}"),
    }
}

/// Exhaustive minimum of the integer energy over all pixel subsets, by Gray code.
fn brute_force(grid: &GridProblem) -> (i64, Vec<bool>) {
    let pixels: Vec<usize> = (0..grid.mask.len()).filter(|&k| grid.mask[k] && !grid.seeds[k]).collect();
    let mut sel = grid.seeds.clone();
    let u = grid.kappa_units();
    let offs: Vec<((i32, i32), i64)> =
        grid.stencil.offsets.iter().copied().zip(grid.stencil.units.iter().copied()).collect();
    let nbr = |k: usize, o: (i32, i32)| {
        let i = (k % grid.nx) as i64 + o.0 as i64;
        let j = (k / grid.nx) as i64 + o.1 as i64;
        (i >= 0 && j >= 0 && i < grid.nx as i64 && j < grid.ny as i64).then(|| j as usize * grid.nx + i as usize)
    };
    let mut energy = grid.energy_units(&sel);
    let mut best = energy;
    let mut union = sel.clone();
    let n = pixels.len();
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let k = pixels[bit];
        let mut add = -u;
        for &(o, w) in &offs {
            add += if nbr(k, o).is_some_and(|m| sel[m]) { -w } else { w };
        }
        let delta = if sel[k] { -add } else { add };
        sel[k] = !sel[k];
        energy += delta;
        if energy < best {
            best = energy;
            union = sel.clone();
        } else if energy == best {
            union.iter_mut().zip(&sel).for_each(|(a, b)| *a |= *b);
        }
    }
    (best, union)
}

fn oracle_exactness() -> Line {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 3);
    let mut mismatches = Vec::new();
    let mut largest = 0;
    for case in 0..EXHAUSTIVE_GRIDS {
        let nx = rng.random_range(1..=12);
        let ny = rng.random_range(1..=12);
        let want = rng.random_range(1..=EXHAUSTIVE_MAX_PIXELS.min(nx * ny));
        let mut mask = vec![false; nx * ny];
        let mut count = 0;
        while count < want {
            let k = rng.random_range(0..nx * ny);
            if !mask[k] {
                mask[k] = true;
                count += 1;
            }
        }
        let stencil = [StencilKind::N4, StencilKind::N8, StencilKind::N16][case % 3];
        let h = rng.random_range(0.01..0.5);
        let kappa = rng.random_range(0.0..4.0) / h;
        let mut grid = GridProblem::new(h, nx, ny, mask, stencil, kappa).unwrap();
        if case % 5 == 4 {
            let k = (0..nx * ny).find(|&k| grid.mask[k]).unwrap();
            grid.seeds[k] = true;
        }
        largest = largest.max(want);
        let cut = min_cut_f(&grid).unwrap();
        let (best, maximal) = brute_force(&grid);
        if cut.energy_units != best || grid.energy_units(&cut.selected) != best || cut.selected != maximal {
            mismatches.push(case);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Line {
        pass: mismatches.is_empty() && secs < EXHAUSTIVE_SECONDS,
        name: "Oracle exactness vs exhaustive enumeration",
        detail: format!("{EXHAUSTIVE_GRIDS} grids up to {largest} free pixels; mismatches {mismatches:?}; {secs:.2}s"),
    }
}

fn oracle_convergence() -> Line {
    let t = Instant::now();
    let prof = profile(common::square());
    let exact = prof.f_value(10.0).unwrap();
    let errors: Vec<f64> = [64.0, 128.0, 256.0]
        .iter()
        .map(|n| {
            let g = rasterize(&common::square(), 1.0 / n).unwrap().with_kappa(10.0);
            rel(min_cut_f(&g).unwrap().value, exact)
        })
        .collect();
    let secs = t.elapsed().as_secs_f64();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Line {
        pass: monotone && errors[2] <= ORACLE_REL && secs < CONVERGENCE_SECONDS,
        name: "Oracle convergence, F(10) on the unit square",
        detail: format!("F(10) {exact}; relative errors {errors:.5?}; {secs:.2}s"),
    }
}

fn sign_probe() -> Line {
    let sq = profile(common::square());
    let glued = profile(common::glued());
    let sample = |prof: &IsoProfile, p: f64| -> Vec<(f64, Sign, f64)> {
        let (lo, hi) = (prof.inball_volume(), prof.domain().area());
        (1..=PROBE_VOLUMES)
            .map(|k| {
                let v = lo + (hi - lo) * k as f64 / (PROBE_VOLUMES + 1) as f64;
                let s = prof.supercritical_sign_probe(p, v).unwrap();
                (v, s.sign, s.value)
            })
            .collect()
    };
    let square = sample(&sq, 0.75);
    let nonneg = square.iter().all(|(_, s, _)| *s != Sign::Negative);
    let thin = sample(&glued, 2.0);
    let negative = thin.iter().find(|(_, s, _)| *s == Sign::Negative);
    let min_sq = square.iter().map(|x| x.2).fold(f64::INFINITY, f64::min);
    Line {
        pass: nonneg && negative.is_some(),
        name: "Supercritical sign probe",
        detail: format!(
            "square p=0.75 min {min_sq:.3e} over {PROBE_VOLUMES} volumes; glued p=2 negative at {:?}",
            negative.map(|(v, _, val)| (*v, *val))
        ),
    }
}

fn neck() -> Line {
    let d = common::dumbbell();
    let report = no_neck_check(&d, ProfileOptions::default().neck_samples).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dumbbell.json");
    std::fs::write(&input, serde_json::json!({ "vertices": common::DUMBBELL }).to_string()).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_cheegerlab"))
        .args(["inspect", "--input"])
        .arg(&input)
        .output()
        .unwrap()
        .status
        .code();
    let big_r = d.inradius().radius;
    let kappas = geomspace(1.1 / big_r, 10.0 / big_r, 8);
    let sweep = oracle_i(&d, 1.0 / 256.0, StencilKind::N16, &kappas).unwrap();
    let deviation = sweep
        .iter()
        .map(|pt| {
            let (v, p) = d.rolled_measure(1.0 / pt.kappa).unwrap();
            rel(pt.volume, v).max(rel(pt.perimeter, p))
        })
        .fold(0.0, f64::max);
    Line {
        pass: !report.passes && status == Some(3) && deviation > NECK_DEVIATION,
        name: "Neck rejection",
        detail: format!("no-neck passes {}; CLI exit {status:?}; max oracle deviation {deviation:.3}", report.passes),
    }
}

fn main() {
    let polys: Vec<IsoProfile> = common::random_convex(RANDOM_POLYGONS, RANDOM_SEED).into_iter().map(profile).collect();
    let lines = [
        cheeger_square(),
        ball(),
        vmap_square(),
        trichotomy(),
        curvature_identity(&polys),
        f_properties(&polys),
        duality(&polys),
        derivative(&polys),
        oracle_exactness(),
        oracle_convergence(),
        sign_probe(),
        neck(),
    ];
    let mut failed = 0;
    for l in &lines {
        println!("{} {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
