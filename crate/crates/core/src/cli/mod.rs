//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::geometry::{no_neck_check, render_svg, ArcRegion, Domain};
use crate::oracle::{compare, oracle_h1, seeded_cuts, sweep_csv, to_pbm, StencilKind, SweepPoint};
use crate::pcheeger::{scan_v, solve_h, CheegerResult, CSV_HEADER};
use crate::profile::{IsoProfile, ProfileOptions};
use crate::scalar::geomspace;

#[derive(Parser, Debug)]
#[command(
    name = "cheegerlab",
    version,
    about = "p-Cheeger sets, isoperimetric profiles and prescribed-curvature minimizers of planar polygons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Area, perimeter, inradius and the no-neck report.
    Inspect(Common),
    /// Rolled-set table, H(1), m, M and κ̄.
    Profile(Common),
    /// Cheeger constant and Cheeger set.
    Cheeger(Common),
    /// p-Cheeger constants and minimizers.
    Pcheeger {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exponents.
        #[arg(long, value_parser = parse_list)]
        p: FloatList,
    },
    /// Volume map over a p-grid, with verdicts.
    Vmap {
        #[command(flatten)]
        common: Common,
        /// `start:end:count`.
        #[arg(long, value_parser = parse_grid)]
        p_grid: FloatList,
    },
    /// Grid min-cut sweep compared with the rolled family.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Grid spacing; defaults to 1/256 of the larger bounding-box side.
        #[arg(long)]
        h: Option<f64>,
        /// Perimeter stencil: 4, 8 or 16 neighbours.
        #[arg(long, default_value = "16", value_parser = parse_stencil)]
        stencil: StencilKind,
        /// Comma-separated curvatures; defaults to 8 values from 1.1/R to 10/R.
        #[arg(long, value_parser = parse_list)]
        kappa: Option<FloatList>,
        /// Also compute the discrete Cheeger constant.
        #[arg(long)]
        h1: bool,
        /// Write one PBM mask per curvature.
        #[arg(long)]
        masks: bool,
    },
    /// SVG of the domain with minimizers for the given curvatures, volumes and exponents.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_list)]
        kappa: Option<FloatList>,
        #[arg(long, value_parser = parse_list)]
        volume: Option<FloatList>,
        #[arg(long, value_parser = parse_list)]
        p: Option<FloatList>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Inspect(c) | Command::Profile(c) | Command::Cheeger(c) => c,
            Command::Pcheeger { common, .. }
            | Command::Vmap { common, .. }
            | Command::Oracle { common, .. }
            | Command::Render { common, .. } => common,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Domain JSON: `{"vertices": [[x, y], ...]}` or `{"disk": {"center": [x, y], "radius": r}}`.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Machine JSON on stdout instead of a human summary.
    #[arg(long)]
    pub json: bool,
    /// Radii in the profile table.
    #[arg(long)]
    pub n_r: Option<usize>,
    /// Root tolerance for F(κ) = 0.
    #[arg(long)]
    pub tol_froot: Option<f64>,
    /// Relative width of a flat stretch of 𝔎.
    #[arg(long)]
    pub tol_kflat: Option<f64>,
    /// Convexity slack for I, relative to |Ω|.
    #[arg(long)]
    pub tol_conv: Option<f64>,
    /// Recorded in reports; no command draws random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parsed comma list or grid (a newtype so clap treats it as one value).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_float(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

pub fn parse_list(s: &str) -> Result<FloatList, String> {
    let v = s.split(',').map(parse_float).collect::<Result<Vec<_>, _>>()?;
    Ok(FloatList(v))
}

/// `start:end:count`, endpoints included.
pub fn parse_grid(s: &str) -> Result<FloatList, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(format!("expected start:end:count, got {s:?}")) };
    let (a, b) = (parse_float(a)?, parse_float(b)?);
    let n: usize = n.trim().parse().map_err(|_| format!("bad count {n:?}"))?;
    match n {
        0 => Err("count must be positive".into()),
        1 => Ok(FloatList(vec![a])),
        _ => Ok(FloatList((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())),
    }
}

fn parse_stencil(s: &str) -> Result<StencilKind, String> {
    s.trim()
        .parse::<usize>()
        .ok()
        .and_then(StencilKind::from_neighbours)
        .ok_or_else(|| format!("stencil must be 4, 8 or 16, got {s:?}"))
}

/// What a command prints and writes.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub human: String,
    pub files: Vec<PathBuf>,
}

struct Ctx<'a> {
    common: &'a Common,
    files: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), Error> {
        let path = self.common.out.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.files.push(path);
        Ok(())
    }

    fn done(self, report: Value, human: String) -> Outcome {
        Outcome { report, human, files: self.files }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.display().to_string(), source }
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn load(common: &Common) -> Result<Domain, Error> {
    let text = fs::read_to_string(&common.input).map_err(io_err(&common.input))?;
    Ok(Domain::from_json(&text)?)
}

fn options(common: &Common) -> ProfileOptions {
    let mut o = ProfileOptions::default();
    if let Some(n) = common.n_r {
        o.n_r = n;
    }
    if let Some(t) = common.tol_froot {
        o.tol_froot = t;
    }
    if let Some(t) = common.tol_kflat {
        o.tol_kflat = t;
    }
    if let Some(t) = common.tol_conv {
        o.tol_conv = t;
    }
    o
}

fn validate(common: &Common) -> Result<(), Error> {
    let positive = |name: &str, x: Option<f64>| match x {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Error::Config(format!("--{name} must be positive"))),
        _ => Ok(()),
    };
    positive("tol-froot", common.tol_froot)?;
    positive("tol-kflat", common.tol_kflat)?;
    positive("tol-conv", common.tol_conv)?;
    if common.n_r.is_some_and(|n| n < 8) {
        return Err(Error::Config("--n-r must be at least 8".into()));
    }
    Ok(())
}

fn profile(common: &Common) -> Result<IsoProfile, Error> {
    Ok(IsoProfile::build(load(common)?, options(common))?)
}

fn svg(domain: &Domain, layers: &[(ArcRegion, String)]) -> String {
    let refs: Vec<(&ArcRegion, &str)> = layers.iter().map(|(r, l)| (r, l.as_str())).collect();
    render_svg(domain.boundary(), &refs)
}

fn file_tag(x: f64) -> String {
    x.to_string().replace('-', "m")
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Inspect(c) => inspect(c),
        Command::Profile(c) => profile_cmd(c),
        Command::Cheeger(c) => cheeger(c),
        Command::Pcheeger { common, p } => pcheeger(common, &p.0),
        Command::Vmap { common, p_grid } => vmap(common, &p_grid.0),
        Command::Oracle { common, h, stencil, kappa, h1, masks } => {
            oracle(common, *h, *stencil, kappa.as_ref().map(|k| k.0.as_slice()), *h1, *masks)
        }
        Command::Render { common, kappa, volume, p } => {
            let list = |l: &Option<FloatList>| l.as_ref().map(|l| l.0.clone()).unwrap_or_default();
            render(common, &list(kappa), &list(volume), &list(p))
        }
    }
}

fn inspect(c: &Common) -> Result<Outcome, Error> {
    validate(c)?;
    let domain = load(c)?;
    let options = options(c);
    let neck = no_neck_check(&domain, options.neck_samples)?;
    if !neck.passes {
        return Err(crate::profile::ProfileError::NeckDetected {
            radius: neck.failing_radius.unwrap_or(f64::NAN),
            report: neck,
        }
        .into());
    }
    let inr = domain.inradius();
    let center = inr.witnesses()[0];
    let report = json!({
        "area": domain.area(),
        "perimeter": domain.perimeter(),
        "inradius": inr.radius,
        "incenter": center,
        "convex": domain.is_convex(),
        "disk": domain.is_disk(),
        "no_neck": neck,
        "seed": c.seed,
    });
    let human = format!(
        "area {}\nperimeter {}\ninradius {} at ({}, {})\nno neck: passes\n",
        domain.area(),
        domain.perimeter(),
        inr.radius,
        center.x,
        center.y
    );
    Ok(Ctx { common: c, files: vec![] }.done(report, human))
}

fn profile_cmd(c: &Common) -> Result<Outcome, Error> {
    validate(c)?;
    let prof = profile(c)?;
    let mut ctx = Ctx { common: c, files: vec![] };
    let summary = prof.summary();
    ctx.write("profile.csv", &prof.to_csv())?;
    let report = serde_json::to_value(&summary)?;
    ctx.write("profile_summary.json", &pretty(&report)?)?;
    let human = format!(
        "H(1) {}\nmVol {}\nMVol {}\nkappa_bar {}\n",
        summary.h1, summary.m_vol, summary.big_m_vol, summary.kappa_bar
    );
    Ok(ctx.done(report, human))
}

fn cheeger(c: &Common) -> Result<Outcome, Error> {
    validate(c)?;
    let prof = profile(c)?;
    let mut ctx = Ctx { common: c, files: vec![] };
    let set = prof.cheeger_set()?;
    ctx.write("cheeger_set.svg", &svg(prof.domain(), &[(set.region.clone(), "cheeger".into())]))?;
    let report = json!({
        "h": prof.h1(),
        "radius": set.r,
        "volume": set.volume,
        "perimeter": set.perimeter,
        "m_vol": prof.summary().m_vol,
        "big_m_vol": prof.summary().big_m_vol,
    });
    let human = format!("h {}\nvolume {}\nperimeter {}\n", prof.h1(), set.volume, set.perimeter);
    Ok(ctx.done(report, human))
}

fn result_layers(r: &CheegerResult) -> Vec<(ArcRegion, String)> {
    r.minimizers.iter().enumerate().map(|(k, m)| (m.region.clone(), format!("p={} #{k} V={}", r.p, m.volume))).collect()
}

fn pcheeger(c: &Common, ps: &[f64]) -> Result<Outcome, Error> {
    validate(c)?;
    let prof = profile(c)?;
    let mut ctx = Ctx { common: c, files: vec![] };
    let results = ps.iter().map(|&p| solve_h(&prof, p)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from(CSV_HEADER);
    let mut human = String::new();
    for r in &results {
        r.csv_rows(&mut csv);
        ctx.write(&format!("pcheeger_p{}.svg", file_tag(r.p)), &svg(prof.domain(), &result_layers(r)))?;
        let _ = writeln!(human, "p {} H {} volumes {}", r.p, r.hp, r.volumes);
    }
    ctx.write("pcheeger.csv", &csv)?;
    let report = json!({ "results": results });
    ctx.write("pcheeger.json", &pretty(&report)?)?;
    Ok(ctx.done(report, human))
}

fn vmap(c: &Common, grid: &[f64]) -> Result<Outcome, Error> {
    validate(c)?;
    let prof = profile(c)?;
    let mut ctx = Ctx { common: c, files: vec![] };
    let scan = scan_v(&prof, grid)?;
    ctx.write("vmap.csv", &scan.to_csv())?;
    let report = json!({
        "p_grid": scan.p_grid,
        "monotonicity": scan.monotonicity,
        "injectivity": scan.injectivity,
        "continuity": scan.continuity,
        "coarse_jump": scan.coarse_jump,
        "fine_jump": scan.fine_jump,
        "p_bar": scan.p_bar,
    });
    ctx.write("vmap.json", &pretty(&report)?)?;
    let human = format!(
        "monotonicity {}\ninjectivity {}\ncontinuity {} (jumps {} -> {})\np_bar {}\n",
        scan.monotonicity.status,
        scan.injectivity.status,
        scan.continuity.status,
        scan.coarse_jump,
        scan.fine_jump,
        scan.p_bar
    );
    Ok(ctx.done(report, human))
}

fn oracle(
    c: &Common,
    h: Option<f64>,
    stencil: StencilKind,
    kappas: Option<&[f64]>,
    with_h1: bool,
    masks: bool,
) -> Result<Outcome, Error> {
    validate(c)?;
    let domain = load(c)?;
    let mut options = options(c);
    options.allow_necks = true;
    let prof = IsoProfile::build(domain.clone(), options)?;
    let (lo, hi) = domain.bbox();
    let h = h.unwrap_or(((hi.x - lo.x).max(hi.y - lo.y)) / 256.0);
    let big_r = prof.inradius();
    let kappas = kappas.map_or_else(|| geomspace(1.1 / big_r, 10.0 / big_r, 8), <[f64]>::to_vec);
    if kappas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("--kappa must be strictly increasing".into()));
    }
    let mut ctx = Ctx { common: c, files: vec![] };
    let (grid, cuts) = seeded_cuts(&domain, h, stencil, &kappas)?;
    let points: Vec<SweepPoint> = kappas
        .iter()
        .zip(&cuts)
        .map(|(&kappa, c)| SweepPoint { kappa, volume: c.volume, perimeter: c.perimeter_estimate, value: c.value })
        .collect();
    ctx.write("oracle_sweep.csv", &sweep_csv(&points, h, stencil))?;
    if masks {
        for (k, cut) in cuts.iter().enumerate() {
            ctx.write(&format!("oracle_mask_{k}.pbm"), &to_pbm(grid.nx, grid.ny, &cut.selected))?;
        }
    }
    let mut rows = Vec::new();
    let mut max_dev: f64 = 0.0;
    for pt in &points {
        let row = if pt.kappa * big_r >= 1.0 {
            let (v, p) = domain.rolled_measure(1.0 / pt.kappa)?;
            let f = p - pt.kappa * v;
            let dev = ((pt.volume - v).abs() / v).max((pt.perimeter - p).abs() / p);
            max_dev = max_dev.max(dev);
            json!({
                "oracle": pt,
                "rolled": { "volume": v, "perimeter": p, "value": f },
                "deviation": dev,
                "f_compare": compare(f, pt.value, h, stencil),
            })
        } else {
            json!({ "oracle": pt, "rolled": null })
        };
        rows.push(row);
    }
    let mut human = format!("h {h} stencil {}\nmax rolled-family deviation {max_dev}\n", stencil.neighbours());
    let h1 = if with_h1 {
        let (value, _) = oracle_h1(&domain, h, stencil)?;
        let cmp = compare(prof.h1(), value, h, stencil);
        let _ = writeln!(human, "H(1) oracle {value} profile {} pass {}", prof.h1(), cmp.pass);
        json!({ "oracle": value, "profile": prof.h1(), "compare": cmp })
    } else {
        Value::Null
    };
    let no_neck = prof.neck_report().passes;
    if !no_neck {
        human.push_str("domain has a neck: the rolled family is not a valid prediction\n");
    }
    let report = json!({
        "h": h,
        "stencil": stencil,
        "no_neck": no_neck,
        "points": rows,
        "max_deviation": max_dev,
        "h1": h1,
    });
    ctx.write("oracle.json", &pretty(&report)?)?;
    Ok(ctx.done(report, human))
}

fn render(c: &Common, kappas: &[f64], volumes: &[f64], ps: &[f64]) -> Result<Outcome, Error> {
    validate(c)?;
    if kappas.is_empty() && volumes.is_empty() && ps.is_empty() {
        return Err(Error::Config("render needs --kappa, --volume or --p".into()));
    }
    let prof = profile(c)?;
    let mut ctx = Ctx { common: c, files: vec![] };
    let mut layers: Vec<(ArcRegion, String)> = Vec::new();
    let mut csv = String::from("label,volume,perimeter\n");
    let mut push = |region: ArcRegion, label: String, volume: f64, perimeter: f64| {
        let _ = writeln!(csv, "{label},{volume:?},{perimeter:?}");
        layers.push((region, label));
    };
    for &k in kappas {
        let (_, set) = prof.f_of_kappa(k)?;
        push(set.region, format!("kappa={k}"), set.volume, set.perimeter);
    }
    for &v in volumes {
        let set = prof.isoperimetric_set(v, true)?;
        push(set.region, format!("V={v}"), set.volume, set.perimeter);
    }
    for &p in ps {
        let r = solve_h(&prof, p)?;
        for m in r.minimizers {
            push(m.region, format!("p={p} V={}", m.volume), m.volume, m.perimeter);
        }
    }
    ctx.write("render.svg", &svg(prof.domain(), &layers))?;
    ctx.write("render.csv", &csv)?;
    let human = format!("{} sets rendered\n", layers.len());
    let report = json!({ "sets": layers.iter().map(|(r, l)| json!({"label": l, "volume": r.area(), "perimeter": r.perimeter()})).collect::<Vec<_>>() });
    Ok(ctx.done(report, human))
}

fn pretty(v: &Value) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
