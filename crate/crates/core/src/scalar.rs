//! Scalar root finding and minimization.

/// Bisection for a sign change of `f` on `[a, b]`; returns `None` without a bracket.
pub fn bisect<F, E>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64, max_iter: usize) -> Result<Option<f64>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) || (b - a).abs() <= rel_tol * m.abs() {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Illinois regula falsi on a bracket `[a, b]` with `f(a)`, `f(b)` of opposite signs.
/// Falls back to bisection steps whenever the secant update stalls.
pub fn illinois<F, E>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut side = 0i8;
    for it in 0..max_iter {
        let width = (b - a).abs();
        if width <= rel_tol * a.abs().max(b.abs()) {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) || it % 8 == 7 {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min<F, E>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64, max_iter: usize) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..max_iter {
        if (b - a).abs() <= rel_tol * (c.abs() + d.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// `n` points geometrically spaced from `lo` to `hi` inclusive.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let ratio = hi / lo;
            (0..n).map(|k| if k == n - 1 { hi } else { lo * ratio.powf(k as f64 / (n - 1) as f64) }).collect()
        }
    }
}
