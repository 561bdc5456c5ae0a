//! Scalar root finding, quadrature and small statistics helpers shared by the
//! geometric modules.
//!
//! Everything here is deterministic: no randomized starts and no
//! order-dependent reductions.

/// Hard cap on bisection iterations. 200 halvings exhaust any finite `f64`
/// bracket.
const MAX_BISECTIONS: usize = 200;

/// Bisection on a sign change of `f` between `lo` and `hi`.
///
/// Returns `None` when `f(lo)` and `f(hi)` have the same strict sign. Stops
/// when the bracket is narrower than `tol` or stops shrinking in floating
/// point. A bracket end where `f` vanishes exactly is returned as-is.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bracketing false position with the Illinois modification. Keeps a sign
/// change at every step, so it converges wherever [`bisect`] does, usually in
/// a dozen evaluations instead of fifty. Stops when `|f| ≤ ftol` or the
/// bracket cannot shrink further.
pub fn illinois<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, ftol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo.abs() <= ftol {
        return Some(lo);
    }
    if f_hi.abs() <= ftol {
        return Some(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    let mut side = 0i8;
    for _ in 0..MAX_BISECTIONS {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        if x == lo || x == hi {
            return Some(x);
        }
        let fx = f(x);
        if fx.abs() <= ftol {
            return Some(x);
        }
        if (fx > 0.0) == (f_lo > 0.0) {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection on a monotone predicate: `pred(lo)` holds, `pred(hi)` does not.
/// Returns the last point known to satisfy the predicate.
pub fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_BISECTIONS {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum of `f` on `[a, b]`: a uniform scan followed by golden-section
/// refinement around the best sample. Exact for concave `f`, a good estimate
/// otherwise. Returns `(argmax, max)`.
pub fn scan_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize) -> (f64, f64) {
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let mut best = (a, f(a));
    for k in 1..=n {
        let x = if k == n { b } else { a + h * k as f64 };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let lo = (best.0 - h).max(a);
    let hi = (best.0 + h).min(b);
    let (x, neg) = golden_min(|x| -f(x), lo, hi, 1e-14 * (b - a).abs().max(1e-300));
    if -neg > best.1 {
        (x, -neg)
    } else {
        best
    }
}

/// Adaptive Simpson quadrature of a vector-valued integrand.
///
/// The error test takes the largest component error, so callers should keep
/// the components on comparable scales. `tol` is absolute.
pub fn adaptive_simpson<const N: usize, F>(f: &F, a: f64, b: f64, tol: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    if a == b {
        return [0.0; N];
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, &fa, &fm, &fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson<const N: usize>(a: f64, b: f64, fa: &[f64; N], fm: &[f64; N], fb: &[f64; N]) -> [f64; N] {
    let w = (b - a) / 6.0;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = w * (fa[i] + 4.0 * fm[i] + fb[i]);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<const N: usize, F>(
    f: &F,
    a: f64,
    b: f64,
    fa: [f64; N],
    fm: [f64; N],
    fb: [f64; N],
    whole: [f64; N],
    tol: f64,
    depth: u32,
) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, &fa, &flm, &fm);
    let right = simpson(m, b, &fm, &frm, &fb);
    let err = (0..N)
        .map(|i| (left[i] + right[i] - whole[i]).abs())
        .fold(0.0, f64::max);
    if depth == 0 || err <= 15.0 * tol || m == a || m == b {
        let mut out = [0.0; N];
        for i in 0..N {
            let delta = left[i] + right[i] - whole[i];
            out[i] = left[i] + right[i] + delta / 15.0;
        }
        return out;
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = l[i] + r[i];
    }
    out
}

/// Integrates over `[a, b]` split at the given interior breakpoints, so that
/// kinks of the integrand fall on panel boundaries. `tol` is split evenly.
pub fn piecewise_simpson<const N: usize, F>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    let mut knots = Vec::with_capacity(breaks.len() + 2);
    knots.push(a);
    knots.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    knots.push(b);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let pieces = (knots.len() - 1).max(1) as f64;
    let mut out = [0.0; N];
    for w in knots.windows(2) {
        let part = adaptive_simpson(f, w[0], w[1], tol / pieces);
        for i in 0..N {
            out[i] += part[i];
        }
    }
    out
}

/// Locates the roots of `g` on `[a, b]` by a uniform sign scan followed by
/// bisection. Roots closer together than one scan cell can be missed.
pub fn scan_roots<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut g0 = g(a);
    for k in 1..=n {
        let x1 = if k == n { b } else { a + h * k as f64 };
        let g1 = g(x1);
        if g0.is_finite() && g1.is_finite() && (g0 < 0.0) != (g1 < 0.0) {
            if let Some(r) = bisect(&g, x0, x1, 0.0) {
                roots.push(r);
            }
        }
        x0 = x1;
        g0 = g1;
    }
    roots
}

/// Median of a sample; the mean of the two central values for even lengths.
/// Returns NaN for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = theta.rem_euclid(tau);
    if w >= tau {
        0.0
    } else {
        w
    }
}
