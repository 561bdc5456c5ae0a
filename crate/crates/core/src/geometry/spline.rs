//! C² cubic interpolation for sampled profiles and radial functions.

use std::f64::consts::TAU;

/// Interpolating cubic spline with continuous second derivative.
///
/// Natural end conditions for open grids; periodic conditions (period 2π) for
/// angular grids.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    periodic: bool,
}

impl CubicSpline {
    /// Natural spline through `(x[i], y[i])`; `x` strictly increasing, at least
    /// two points.
    pub fn natural(x: &[f64], y: &[f64]) -> Result<Self, String> {
        check_grid(x, y, 2)?;
        let n = x.len() - 1;
        let mut m = vec![0.0; n + 1];
        if n >= 2 {
            // Interior unknowns M_1..M_{n-1}.
            let k = n - 1;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                sub[j] = h0;
                diag[j] = 2.0 * (h0 + h1);
                sup[j] = h1;
                rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            let sol = thomas(&sub, &diag, &sup, &rhs);
            m[1..n].copy_from_slice(&sol);
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
            periodic: false,
        })
    }

    /// Periodic spline through angular samples. `theta` must be strictly
    /// increasing within a window shorter than 2π; at least three points.
    pub fn periodic(theta: &[f64], y: &[f64]) -> Result<Self, String> {
        check_grid(theta, y, 3)?;
        if theta[theta.len() - 1] - theta[0] >= TAU {
            return Err("angular samples must span less than one full turn".into());
        }
        let n = theta.len();
        let h = |i: usize| {
            if i + 1 < n {
                theta[i + 1] - theta[i]
            } else {
                theta[0] + TAU - theta[n - 1]
            }
        };
        let d = |i: usize| (y[(i + 1) % n] - y[i]) / h(i);
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            sub[i] = h(prev);
            diag[i] = 2.0 * (h(prev) + h(i));
            sup[i] = h(i);
            rhs[i] = 6.0 * (d(i) - d(prev));
        }
        let m = cyclic_thomas(&sub, &diag, &sup, &rhs);
        Ok(Self {
            x: theta.to_vec(),
            y: y.to_vec(),
            m,
            periodic: true,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Locates the panel for `t` and returns `(i, offset, width, y_next, m_next)`.
    fn panel(&self, t: f64) -> (usize, f64, f64, f64, f64) {
        let n = self.x.len();
        if self.periodic {
            let base = self.x[0];
            let u = (t - base).rem_euclid(TAU) + base;
            let i = match self.x.partition_point(|xi| *xi <= u) {
                0 => 0,
                p => p - 1,
            };
            let (w, y1, m1) = if i + 1 < n {
                (self.x[i + 1] - self.x[i], self.y[i + 1], self.m[i + 1])
            } else {
                (base + TAU - self.x[i], self.y[0], self.m[0])
            };
            (i, u - self.x[i], w, y1, m1)
        } else {
            let i = self.x.partition_point(|xi| *xi <= t).clamp(1, n - 1) - 1;
            let w = self.x[i + 1] - self.x[i];
            (i, t - self.x[i], w, self.y[i + 1], self.m[i + 1])
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, s, w, y1, m1) = self.panel(t);
        let (y0, m0) = (self.y[i], self.m[i]);
        let b = (y1 - y0) / w - w * (2.0 * m0 + m1) / 6.0;
        y0 + s * (b + s * (0.5 * m0 + s * (m1 - m0) / (6.0 * w)))
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let (i, s, w, y1, m1) = self.panel(t);
        let (y0, m0) = (self.y[i], self.m[i]);
        let b = (y1 - y0) / w - w * (2.0 * m0 + m1) / 6.0;
        b + s * (m0 + s * (m1 - m0) / (2.0 * w))
    }
}

fn check_grid(x: &[f64], y: &[f64], min_len: usize) -> Result<(), String> {
    if x.len() != y.len() {
        return Err(format!(
            "sample length mismatch: {} abscissae, {} values",
            x.len(),
            y.len()
        ));
    }
    if x.len() < min_len {
        return Err(format!("need at least {min_len} samples, got {}", x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err("samples must be finite".into());
    }
    if x.windows(2).any(|w| w[1] <= w[0]) {
        return Err("sample abscissae must be strictly increasing".into());
    }
    Ok(())
}

/// Tridiagonal solve; `sub[0]` and `sup[k-1]` are ignored.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let k = diag.len();
    let mut c = vec![0.0; k];
    let mut d = vec![0.0; k];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..k {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; k];
    x[k - 1] = d[k - 1];
    for i in (0..k - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Cyclic tridiagonal solve by Sherman-Morrison. `sub[0]` couples row 0 to
/// the last unknown, `sup[k-1]` couples the last row to unknown 0.
fn cyclic_thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let k = diag.len();
    let alpha = sup[k - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[k - 1] = diag[k - 1] - alpha * beta / gamma;
    let x = thomas(sub, &bb, sup, rhs);
    let mut u = vec![0.0; k];
    u[0] = gamma;
    u[k - 1] = alpha;
    let z = thomas(sub, &bb, sup, &u);
    let fact = (x[0] + beta * x[k - 1] / gamma) / (1.0 + z[0] + beta * z[k - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_spline_reproduces_lines_exactly() {
        let x = [0.0, 0.5, 1.5, 2.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t - 1.0).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        for t in [0.1, 0.7, 1.9] {
            assert!((s.eval(t) - (3.0 * t - 1.0)).abs() < 1e-14);
            assert!((s.deriv(t) - 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn natural_spline_interpolates_nodes() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi) - yi).abs() < 1e-14);
        }
        assert!((s.eval(0.95) - 0.95f64.sin()).abs() < 1e-4);
    }

    #[test]
    fn periodic_spline_matches_trig_and_wraps() {
        let n = 64;
        let th: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let y: Vec<f64> = th.iter().map(|t| 2.0 + 0.3 * (3.0 * t).cos()).collect();
        let s = CubicSpline::periodic(&th, &y).unwrap();
        for t in [0.01f64, 1.0, 3.0, 6.2, -0.5, 7.0] {
            let exact = 2.0 + 0.3 * (3.0 * t).cos();
            assert!((s.eval(t) - exact).abs() < 1e-4, "t={t}");
            assert!((s.deriv(t) + 0.9 * (3.0 * t).sin()).abs() < 1e-2, "t={t}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(CubicSpline::natural(&[0.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(CubicSpline::natural(&[0.0], &[1.0]).is_err());
        assert!(CubicSpline::periodic(&[0.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(CubicSpline::periodic(&[0.0, 1.0, 7.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(CubicSpline::natural(&[0.0, f64::NAN], &[1.0, 1.0]).is_err());
    }
}
