#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use cheegerlab::geometry::{Domain, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn square() -> Domain {
    Domain::from_vertices(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
}

pub fn rectangle() -> Domain {
    Domain::from_vertices(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]).unwrap()
}

pub fn disk() -> Domain {
    Domain::disk(Point::ORIGIN, 1.0).unwrap()
}

pub fn l_shape() -> Domain {
    Domain::from_vertices(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap()
}

pub const DUMBBELL: [[f64; 2]; 12] = [
    [0.0, 0.0],
    [1.0, 0.0],
    [1.0, 0.45],
    [1.5, 0.45],
    [1.5, 0.05],
    [2.4, 0.05],
    [2.4, 0.95],
    [1.5, 0.95],
    [1.5, 0.55],
    [1.0, 0.55],
    [1.0, 1.0],
    [0.0, 1.0],
];

/// Unit square and a `0.9` square joined by a channel of width `0.1`.
pub fn dumbbell() -> Domain {
    Domain::from_vertices(&DUMBBELL).unwrap()
}

/// Unit square with the thin rectangle `[0.05, 0.09] × [−1, 0]` glued below.
pub fn glued() -> Domain {
    Domain::from_vertices(&[
        [0.0, 0.0],
        [0.05, 0.0],
        [0.05, -1.0],
        [0.09, -1.0],
        [0.09, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
    ])
    .unwrap()
}

/// Polygons inscribed in random ellipses, with angular gaps bounded below.
pub fn random_convex(count: usize, seed: u64) -> Vec<Domain> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(8..=16);
        let min_gap = 0.3 * TAU / n as f64;
        let mut gaps: Vec<f64> = (0..n).map(|_| min_gap + rng.random::<f64>()).collect();
        let total: f64 = gaps.iter().sum();
        gaps.iter_mut().for_each(|g| *g *= TAU / total);
        let (a, b) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let rot = rng.random_range(0.0..PI);
        let (cx, cy) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut t = rng.random_range(0.0..TAU);
        let verts: Vec<[f64; 2]> = gaps
            .iter()
            .map(|g| {
                t += g;
                let (x, y) = (a * t.cos(), b * t.sin());
                [cx + x * rot.cos() - y * rot.sin(), cy + x * rot.sin() + y * rot.cos()]
            })
            .collect();
        if let Ok(d) = Domain::from_vertices(&verts) {
            out.push(d);
        }
    }
    out
}

/// Enclosed area of SVG path data made of `M`, `L`, `A` and `Z` commands with absolute
/// coordinates, counting minor arcs only (the writer splits arcs into quarter turns).
pub fn svg_path_area(d: &str) -> f64 {
    let mut tokens = d.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).peekable();
    let mut area = 0.0;
    let mut start = (0.0, 0.0);
    let mut cur = (0.0, 0.0);
    let num = |t: &str| t.parse::<f64>().unwrap();
    while let Some(tok) = tokens.next() {
        let (cmd, rest) = tok.split_at(1);
        let mut arg = |first: &str| if first.is_empty() { num(tokens.next().unwrap()) } else { num(first) };
        match cmd {
            "M" => {
                let x = arg(rest);
                let y = arg("");
                start = (x, y);
                cur = start;
            }
            "L" => {
                let x = arg(rest);
                let y = arg("");
                area += 0.5 * (cur.0 * y - x * cur.1);
                cur = (x, y);
            }
            "A" => {
                let r = arg(rest);
                let _ry = arg("");
                let _rot = arg("");
                let large = arg("");
                let sweep = arg("");
                let x = arg("");
                let y = arg("");
                assert_eq!(large, 0.0, "only minor arcs are expected");
                area += 0.5 * (cur.0 * y - x * cur.1);
                let chord = ((x - cur.0).powi(2) + (y - cur.1).powi(2)).sqrt();
                let theta = 2.0 * (0.5 * chord / r).min(1.0).asin();
                let segment = 0.5 * r * r * (theta - theta.sin());
                // sweep flag 1 is counterclockwise in the y-up frame
                area += if sweep == 1.0 { segment } else { -segment };
                cur = (x, y);
            }
            "Z" => {
                area += 0.5 * (cur.0 * start.1 - start.0 * cur.1);
                cur = start;
            }
            other => panic!("unexpected path command {other:?}"),
        }
    }
    area
}

/// Paths of the filled sets in an SVG written by the CLI.
pub fn svg_set_paths(svg: &str) -> Vec<(String, String)> {
    svg.lines()
        .filter(|l| l.contains(r#"class="set""#))
        .map(|l| {
            let attr = |name: &str| {
                let key = format!(r#"{name}=""#);
                let i = l.find(&key).unwrap() + key.len();
                l[i..i + l[i..].find('"').unwrap()].to_string()
            };
            (attr("data-label"), attr("d"))
        })
        .collect()
}
