use std::fmt;
use std::sync::Arc;

use super::spline::CubicSpline;
use super::{Boundary, GeometryError};
use crate::numeric::{bisect, bisect_predicate, scan_max};

pub(crate) type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Meridian profile `η = f(ξ) ≥ 0`, `ξ ∈ [x_min, x_max]`, of a convex body of
/// revolution about the x-axis.
///
/// Outside the support the radius is zero. The derivative is supplied with the
/// profile (analytic families) or by the interpolant (sampled grids).
#[derive(Clone)]
pub struct RevolutionProfile {
    x_min: f64,
    x_max: f64,
    radius: ScalarFn,
    derivative: ScalarFn,
    label: String,
    argmax: f64,
    max_radius: f64,
}

impl fmt::Debug for RevolutionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RevolutionProfile")
            .field("label", &self.label)
            .field("x_min", &self.x_min)
            .field("x_max", &self.x_max)
            .field("max_radius", &self.max_radius)
            .finish()
    }
}

impl RevolutionProfile {
    pub fn new<R, D>(
        x_min: f64,
        x_max: f64,
        radius: R,
        derivative: D,
        label: impl Into<String>,
    ) -> Result<Self, GeometryError>
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_arcs(x_min, x_max, Arc::new(radius), Arc::new(derivative), label.into())
    }

    fn from_arcs(
        x_min: f64,
        x_max: f64,
        radius: ScalarFn,
        derivative: ScalarFn,
        label: String,
    ) -> Result<Self, GeometryError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(GeometryError::InvalidProfile(format!("bad support [{x_min}, {x_max}]")));
        }
        let r = |x: f64| {
            let v = radius(x);
            if v.is_finite() {
                v.max(0.0)
            } else {
                0.0
            }
        };
        let (scan_x, scan_r) = scan_max(r, x_min, x_max, 512);
        if !(scan_r.is_finite() && scan_r > 0.0) {
            return Err(GeometryError::InvalidProfile("profile has no positive radius".into()));
        }
        // The crest is where the slope changes sign; refine it on the derivative,
        // which is far better conditioned than the flat radius near its maximum.
        let w = x_max - x_min;
        let lo = (scan_x - w / 256.0).max(x_min);
        let hi = (scan_x + w / 256.0).min(x_max);
        let argmax = if derivative(lo) > 0.0 && derivative(hi) < 0.0 {
            bisect_predicate(|x| derivative(x) > 0.0, lo, hi, 0.0)
        } else {
            scan_x
        };
        let max_radius = r(argmax).max(scan_r);
        Ok(Self {
            x_min,
            x_max,
            radius,
            derivative,
            label,
            argmax,
            max_radius,
        })
    }

    /// Profile given through its square `f² = sq(x)` and `(f²)' = dsq(x)`.
    pub fn from_squared<S, D>(
        x_min: f64,
        x_max: f64,
        sq: S,
        dsq: D,
        label: impl Into<String>,
    ) -> Result<Self, GeometryError>
    where
        S: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let sq = Arc::new(sq);
        let sq2 = sq.clone();
        Self::new(
            x_min,
            x_max,
            // Pin the ends to zero: a root of `sq` found by bisection leaves
            // a residue of order √ε under the square root.
            move |x| {
                if x <= x_min || x >= x_max {
                    0.0
                } else {
                    sq(x).max(0.0).sqrt()
                }
            },
            move |x| dsq(x) / (2.0 * sq2(x).max(0.0).sqrt()),
            label,
        )
    }

    /// Ball of radius `r` centred at the origin.
    pub fn ball(r: f64) -> Result<Self, GeometryError> {
        positive("radius", r)?;
        Self::new(
            -r,
            r,
            move |x| ((r - x) * (r + x)).max(0.0).sqrt(),
            move |x| -x / ((r - x) * (r + x)).max(0.0).sqrt(),
            format!("ball(R={r})"),
        )
    }

    /// Ellipsoid of revolution with semi-axis `a` along the axis and
    /// equatorial radius `b`.
    pub fn ellipsoid(a: f64, b: f64) -> Result<Self, GeometryError> {
        positive("semi-axis", a)?;
        positive("semi-axis", b)?;
        Self::new(
            -a,
            a,
            move |x| b * ((1.0 - x / a) * (1.0 + x / a)).max(0.0).sqrt(),
            move |x| -b * x / (a * a * ((1.0 - x / a) * (1.0 + x / a)).max(0.0).sqrt()),
            format!("ellipsoid(a={a}, b={b})"),
        )
    }

    /// Polynomial perturbation of a ball: `f²(x) = R² − x² + eps·x^mode`, on
    /// the component of `{f² ≥ 0}` containing the origin.
    pub fn perturbed_ball(r: f64, eps: f64, mode: u32) -> Result<Self, GeometryError> {
        positive("radius", r)?;
        if !eps.is_finite() {
            return Err(GeometryError::InvalidProfile("eps must be finite".into()));
        }
        if !(2..=16).contains(&mode) {
            return Err(GeometryError::InvalidProfile(format!(
                "mode must lie in 2..=16, got {mode}"
            )));
        }
        let m = mode as i32;
        let sq = move |x: f64| r * r - x * x + eps * x.powi(m);
        let dsq = move |x: f64| -2.0 * x + eps * f64::from(mode) * x.powi(m - 1);
        let right = support_end(sq, r, 1.0)?;
        let left = support_end(sq, r, -1.0)?;
        Self::from_squared(
            left,
            right,
            sq,
            dsq,
            format!("perturbed_ball(R={r}, eps={eps}, mode={mode})"),
        )
    }

    /// Ball perturbed away from the middle: `f²(x) = R² − x² +
    /// eps·max(|x| − x0, 0)⁴`, exactly spherical on `|x| ≤ x0`.
    pub fn bumped_ball(r: f64, eps: f64, x0: f64) -> Result<Self, GeometryError> {
        positive("radius", r)?;
        if !eps.is_finite() || !(x0 >= 0.0 && x0 < r) {
            return Err(GeometryError::InvalidProfile(format!(
                "need finite eps and 0 <= x0 < R, got eps = {eps}, x0 = {x0}"
            )));
        }
        let sq = move |x: f64| r * r - x * x + eps * (x.abs() - x0).max(0.0).powi(4);
        let dsq = move |x: f64| -2.0 * x + 4.0 * eps * x.signum() * (x.abs() - x0).max(0.0).powi(3);
        let right = support_end(sq, r, 1.0)?;
        let left = support_end(sq, r, -1.0)?;
        Self::from_squared(left, right, sq, dsq, format!("bumped_ball(R={r}, eps={eps}, x0={x0})"))
    }

    /// Natural cubic spline through sampled radii.
    pub fn from_samples(x: &[f64], r: &[f64], label: impl Into<String>) -> Result<Self, GeometryError> {
        if r.iter().any(|v| *v < 0.0) {
            return Err(GeometryError::InvalidProfile(
                "sampled radii must be nonnegative".into(),
            ));
        }
        let spline = Arc::new(CubicSpline::natural(x, r).map_err(GeometryError::InvalidProfile)?);
        let (lo, hi) = spline.domain();
        let s2 = spline.clone();
        Self::new(lo, hi, move |t| spline.eval(t), move |t| s2.deriv(t), label)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Location of the profile maximum.
    pub fn argmax(&self) -> f64 {
        self.argmax
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    /// `f(x)`, zero outside the support.
    pub fn radius(&self, x: f64) -> f64 {
        if x < self.x_min || x > self.x_max || x.is_nan() {
            return 0.0;
        }
        let v = (self.radius)(x);
        if v.is_finite() {
            v.max(0.0)
        } else {
            0.0
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    /// The same body moved by `dx` along the axis.
    pub fn translated(&self, dx: f64) -> Self {
        let r = self.radius.clone();
        let d = self.derivative.clone();
        Self {
            x_min: self.x_min + dx,
            x_max: self.x_max + dx,
            radius: Arc::new(move |x| r(x - dx)),
            derivative: Arc::new(move |x| d(x - dx)),
            label: self.label.clone(),
            argmax: self.argmax + dx,
            max_radius: self.max_radius,
        }
    }

    /// The body dilated by `lambda > 0` about the origin.
    pub fn scaled(&self, lambda: f64) -> Self {
        let r = self.radius.clone();
        let d = self.derivative.clone();
        Self {
            x_min: self.x_min * lambda,
            x_max: self.x_max * lambda,
            radius: Arc::new(move |x| lambda * r(x / lambda)),
            derivative: Arc::new(move |x| d(x / lambda)),
            label: self.label.clone(),
            argmax: self.argmax * lambda,
            max_radius: self.max_radius * lambda,
        }
    }

    /// Translates `outer` and `inner` together so that the crest of `inner`
    /// sits at `x = 0`. Returns the pair and the applied shift.
    pub fn normalize_pair(outer: &Self, inner: &Self) -> (Self, Self, f64) {
        let shift = -inner.argmax;
        (outer.translated(shift), inner.translated(shift), shift)
    }

    /// Checks the structural invariants: nonnegative radius vanishing at both
    /// ends, concavity on a sample grid, and agreement of the supplied
    /// derivative with central differences of the radius.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let w = self.x_max - self.x_min;
        let scale = self.max_radius;
        let end_tol = 1e-9 * scale.max(1.0);
        if self.radius(self.x_min) > end_tol || self.radius(self.x_max) > end_tol {
            return Err(GeometryError::InvalidProfile(format!(
                "radius does not vanish at the ends: f({}) = {}, f({}) = {}",
                self.x_min,
                self.radius(self.x_min),
                self.x_max,
                self.radius(self.x_max)
            )));
        }
        let n = 512;
        let samples: Vec<f64> = (0..=n)
            .map(|k| self.radius(self.x_min + w * k as f64 / n as f64))
            .collect();
        for (k, v) in samples.windows(3).enumerate() {
            let second = v[0] - 2.0 * v[1] + v[2];
            if second > 1e-9 * scale.max(1.0) {
                return Err(GeometryError::InvalidProfile(format!(
                    "profile is not concave near x = {}",
                    self.x_min + w * (k + 1) as f64 / n as f64
                )));
            }
        }
        let h = 1e-6 * w;
        for k in 0..100 {
            let x = self.x_min + w * (0.05 + 0.9 * k as f64 / 99.0);
            let fd = (self.radius(x + h) - self.radius(x - h)) / (2.0 * h);
            let d = self.derivative(x);
            if !d.is_finite() || (d - fd).abs() > 1e-6 * (1.0 + d.abs()) {
                return Err(GeometryError::InvalidProfile(format!(
                    "derivative {d} disagrees with finite difference {fd} at x = {x}"
                )));
            }
        }
        Ok(())
    }
}

impl Boundary<3> for RevolutionProfile {
    fn indicator(&self, p: [f64; 3]) -> f64 {
        let rho = p[1].hypot(p[2]);
        if p[0] < self.x_min {
            return rho + (self.x_min - p[0]);
        }
        if p[0] > self.x_max {
            return rho + (p[0] - self.x_max);
        }
        rho - self.radius(p[0])
    }

    fn bounding_ball(&self) -> ([f64; 3], f64) {
        let c = 0.5 * (self.x_min + self.x_max);
        let half = 0.5 * (self.x_max - self.x_min);
        ([c, 0.0, 0.0], half.hypot(self.max_radius) * (1.0 + 1e-9))
    }
}

fn positive(what: &str, v: f64) -> Result<(), GeometryError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidProfile(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

/// First zero of `sq` moving from the origin in direction `sign`.
fn support_end<S: Fn(f64) -> f64>(sq: S, r: f64, sign: f64) -> Result<f64, GeometryError> {
    let step = r / 256.0;
    let mut prev = 0.0;
    for k in 1..=256 * 64 {
        let x = sign * step * k as f64;
        if sq(x) < 0.0 {
            return bisect(&sq, prev, x, 0.0)
                .ok_or_else(|| GeometryError::InvalidProfile("support endpoint not bracketed".into()));
        }
        prev = x;
    }
    Err(GeometryError::InvalidProfile("profile does not close up".into()))
}
