//! Real-root extraction for cubics plus bracketed refinement.

/// Real roots of x^3 + a2 x^2 + a1 x + a0 in ascending order, computed by
/// the trigonometric/Cardano method and polished with a few Newton steps.
/// A double root at a tangency appears twice.
pub fn cubic_real_roots(a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    // Depressed form t^3 + p t + q with x = t - a2/3.
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

    let mut roots = Vec::with_capacity(3);
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        // One real root.
        let sq = disc.sqrt();
        let u = cbrt(-0.5 * q + sq);
        let v = cbrt(-0.5 * q - sq);
        roots.push(u + v - shift);
    } else if p == 0.0 && q == 0.0 {
        roots.extend_from_slice(&[-shift; 3]);
    } else {
        // Three real roots (possibly a double root when disc == 0).
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        for k in 0..3 {
            let t = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            roots.push(t - shift);
        }
    }

    let f = |x: f64| ((x + a2) * x + a1) * x + a0;
    let df = |x: f64| (3.0 * x + 2.0 * a2) * x + a1;
    for r in roots.iter_mut() {
        *r = newton_polish(f, df, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn cbrt(x: f64) -> f64 {
    x.cbrt()
}

/// A few guarded Newton steps from a nearly-converged starting point.
/// Falls back to the input when the iteration does not improve.
fn newton_polish<F, D>(f: F, df: D, x0: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    let mut best = x0;
    let mut best_res = f(x0).abs();
    for _ in 0..6 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = f(x) / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
        let res = f(x).abs();
        if res < best_res {
            best_res = res;
            best = x;
        }
        if step.abs() <= f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    best
}

/// Bisection on a bracketing interval; `f(lo)` and `f(hi)` must have
/// opposite signs. Converges to absolute tolerance `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Newton iteration restricted to a bracket, with bisection as a
/// safeguard. Assumes `f` is monotone on [lo, hi] with a sign change.
pub fn newton_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let descending = flo > 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        // Shrink the bracket around the sign change.
        if (fx > 0.0) == descending {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = if d != 0.0 { x - fx / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() <= rel_tol * x.abs().max(f64::MIN_POSITIVE) {
            return Some(x);
        }
    }
    Some(x)
}
