//! Raw parallel offsets of boundary loops and their trimming to a valid boundary.

use std::f64::consts::TAU;

use super::chain::{ArcPolygon, Element};
use super::intersect::intersect;
use super::point::{turn_angle, Point};

/// Offset curve of a closed loop at signed distance `d` (positive to the right of travel),
/// with round joins at every junction.
pub fn raw_offset(chain: &ArcPolygon, d: f64) -> Vec<Element> {
    let n = chain.elements.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = &chain.elements[i];
        if let Some(off) = e.offset(d) {
            out.push(off);
        }
        let next = &chain.elements[(i + 1) % n];
        let t1 = e.tangent_at(1.0);
        let t2 = next.tangent_at(0.0);
        let theta = turn_angle(t1, t2);
        if theta.abs() > 1e-13 {
            let normal = t1.perp() * (-d.signum());
            out.push(Element::arc(e.end(), d.abs(), normal.angle(), theta));
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct Cut {
    chain: usize,
    elem: usize,
    t: f64,
    point: Point,
}

struct Slice {
    elements: Vec<Element>,
}

impl Slice {
    fn start(&self) -> Point {
        self.elements[0].start()
    }

    fn end(&self) -> Point {
        self.elements[self.elements.len() - 1].end()
    }

    fn length(&self) -> f64 {
        self.elements.iter().map(Element::length).sum()
    }

    /// Points at fractions of the arclength.
    fn point_at_fraction(&self, f: f64) -> Point {
        let mut target = f * self.length();
        for e in &self.elements {
            let l = e.length();
            if target <= l && l > 0.0 {
                return e.point_at(target / l);
            }
            target -= l;
        }
        self.end()
    }
}

fn boxes_overlap(a: &(Point, Point), b: &(Point, Point), tol: f64) -> bool {
    a.0.x <= b.1.x + tol && b.0.x <= a.1.x + tol && a.0.y <= b.1.y + tol && b.0.y <= a.1.y + tol
}

/// Splits closed chains at all mutual and self intersections, keeps the pieces whose
/// midpoint satisfies `valid`, and stitches them into closed counterclockwise loops.
pub fn trim_chains<F>(chains: &[Vec<Element>], tol: f64, valid: F) -> Vec<ArcPolygon>
where
    F: Fn(Point) -> bool,
{
    let flat: Vec<(usize, usize, &Element)> = chains
        .iter()
        .enumerate()
        .flat_map(|(c, ch)| ch.iter().enumerate().map(move |(i, e)| (c, i, e)))
        .filter(|(_, _, e)| e.length() > 0.0)
        .collect();
    let boxes: Vec<_> = flat.iter().map(|(_, _, e)| e.bbox()).collect();

    let mut cuts: Vec<Cut> = Vec::new();
    for x in 0..flat.len() {
        for y in (x + 1)..flat.len() {
            if !boxes_overlap(&boxes[x], &boxes[y], tol) {
                continue;
            }
            let (cx, ix, ex) = flat[x];
            let (cy, iy, ey) = flat[y];
            let len = chains[cx].len();
            let shared: Vec<Point> = if cx == cy {
                let mut s = Vec::new();
                if (ix + 1) % len == iy {
                    s.push(ex.end());
                }
                if (iy + 1) % len == ix {
                    s.push(ey.end());
                }
                s
            } else {
                Vec::new()
            };
            for h in intersect(ex, ey, tol) {
                if shared.iter().any(|p| p.dist(h.point) <= 16.0 * tol) {
                    continue;
                }
                cuts.push(Cut { chain: cx, elem: ix, t: h.t, point: h.point });
                cuts.push(Cut { chain: cy, elem: iy, t: h.u, point: h.point });
            }
        }
    }

    let mut slices: Vec<Slice> = Vec::new();
    for (c, chain) in chains.iter().enumerate() {
        let n = chain.len();
        if n == 0 {
            continue;
        }
        let mut pos: Vec<(usize, f64, Point)> =
            cuts.iter()
                .filter(|k| k.chain == c)
                .map(|k| {
                    if k.t >= 1.0 - 1e-12 {
                        ((k.elem + 1) % n, 0.0, k.point)
                    } else {
                        (k.elem, k.t.max(0.0), k.point)
                    }
                })
                .collect();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for e in chain {
            cum.push(cum[cum.len() - 1] + e.length());
        }
        let total = cum[n];
        let arc_pos = |p: &(usize, f64, Point)| cum[p.0] + p.1 * chain[p.0].length();
        pos.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
        let merge = 16.0 * tol;
        pos.dedup_by(|b, a| arc_pos(b) - arc_pos(a) < merge);
        if pos.len() > 1 && arc_pos(&pos[0]) + total - arc_pos(&pos[pos.len() - 1]) < merge {
            pos.pop();
        }
        if pos.is_empty() {
            slices.push(Slice { elements: chain.clone() });
            continue;
        }
        let m = pos.len();
        for k in 0..m {
            let (e0, t0, _) = pos[k];
            let (e1, t1, _) = pos[(k + 1) % m];
            let mut elems = Vec::new();
            let (mut e, mut t) = (e0, t0);
            let mut first = true;
            loop {
                if e == e1 && (t1 > t || (!first && t1 == t)) {
                    if t1 > t {
                        elems.push(chain[e].sub(t, t1));
                    }
                    break;
                }
                if t < 1.0 {
                    elems.push(chain[e].sub(t, 1.0));
                }
                e = (e + 1) % n;
                t = 0.0;
                first = false;
            }
            elems.retain(|el| el.length() > 0.0);
            if !elems.is_empty() {
                slices.push(Slice { elements: elems });
            }
        }
    }

    let keep: Vec<Slice> = slices.into_iter().filter(|s| valid(s.point_at_fraction(0.5))).collect();

    stitch(keep, tol)
}

fn stitch(slices: Vec<Slice>, tol: f64) -> Vec<ArcPolygon> {
    let join_tol = 1e3 * tol;
    let mut used = vec![false; slices.len()];
    let mut loops: Vec<ArcPolygon> = Vec::new();
    for s0 in 0..slices.len() {
        if used[s0] {
            continue;
        }
        used[s0] = true;
        let mut elems = slices[s0].elements.clone();
        let first = slices[s0].start();
        let mut end = slices[s0].end();
        let mut closed = false;
        for _ in 0..=slices.len() {
            let close_gap = end.dist(first);
            let best = (0..slices.len())
                .filter(|&k| !used[k])
                .map(|k| (k, slices[k].start().dist(end)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match best {
                Some((k, g)) if g < close_gap && g <= join_tol => {
                    used[k] = true;
                    elems.extend_from_slice(&slices[k].elements);
                    end = slices[k].end();
                }
                _ => {
                    closed = close_gap <= join_tol;
                    break;
                }
            }
        }
        if !closed {
            continue;
        }
        let lp = ArcPolygon::from_elements_unchecked(elems);
        if lp.signed_area() > 1e-3 * tol * tol {
            loops.push(lp);
        }
    }
    loops
}

/// Total turning of a closed loop divided by a full turn.
pub fn turning_number(chain: &ArcPolygon) -> f64 {
    let n = chain.elements.len();
    let arcs: f64 = chain
        .elements
        .iter()
        .map(|e| match e {
            Element::Arc(c) => c.sweep,
            Element::Segment { .. } => 0.0,
        })
        .sum();
    let corners: f64 = (0..n).map(|i| chain.corner_turn(i)).sum();
    (arcs + corners) / TAU
}
