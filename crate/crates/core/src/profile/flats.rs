use crate::geometry::Polygon;

/// Half-distances between antiparallel facing edges with overlapping projections, below `R`.
/// These are the radii where the rolled family can jump.
pub fn plateau_radii(poly: &Polygon, inradius: f64) -> Vec<f64> {
    let edges: Vec<_> = poly.edges().collect();
    let scale = poly.diameter();
    let mut out: Vec<f64> = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        let li = a.dist(b);
        let di = (b - a) / li;
        let ni = di.perp();
        for &(c, d) in &edges[i + 1..] {
            let dj = (d - c).normalized();
            if di.dot(dj) > -1.0 + 1e-12 {
                continue;
            }
            let gap = ni.dot(c - a);
            if gap <= 0.0 {
                continue;
            }
            let (p0, p1) = (di.dot(c - a), di.dot(d - a));
            let overlap = li.min(p0.max(p1)) - p0.min(p1).max(0.0);
            if overlap <= 1e-9 * scale {
                continue;
            }
            let r = 0.5 * gap;
            if r < inradius * (1.0 - 1e-9) {
                out.push(r);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * *a);
    out
}
