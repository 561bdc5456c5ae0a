use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use super::profile::{RevolutionProfile, ScalarFn};
use super::spline::CubicSpline;
use super::{cross2, norm, sub, Boundary, GeometryError};
use crate::numeric::{bisect, scan_max};

/// Planar convex body given by its radial function `ρ(θ)` about an interior
/// basepoint.
#[derive(Clone)]
pub struct PlanarBody {
    basepoint: [f64; 2],
    rho: ScalarFn,
    drho: Option<ScalarFn>,
    label: String,
    max_rho: f64,
}

impl fmt::Debug for PlanarBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarBody")
            .field("label", &self.label)
            .field("basepoint", &self.basepoint)
            .field("max_rho", &self.max_rho)
            .finish()
    }
}

impl PlanarBody {
    /// `drho`, when given, must be the derivative of `rho`; otherwise tangents
    /// are taken by central differences.
    pub fn new<R>(
        basepoint: [f64; 2],
        rho: R,
        drho: Option<ScalarFn>,
        label: impl Into<String>,
    ) -> Result<Self, GeometryError>
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(basepoint, Arc::new(rho), drho, label.into())
    }

    fn from_arc(
        basepoint: [f64; 2],
        rho: ScalarFn,
        drho: Option<ScalarFn>,
        label: String,
    ) -> Result<Self, GeometryError> {
        if !(basepoint[0].is_finite() && basepoint[1].is_finite()) {
            return Err(GeometryError::InvalidProfile("basepoint must be finite".into()));
        }
        for k in 0..1024 {
            let v = rho(TAU * k as f64 / 1024.0);
            if !(v.is_finite() && v > 0.0) {
                return Err(GeometryError::InvalidProfile(format!(
                    "radial function must be positive and finite, got {v} at sample {k}"
                )));
            }
        }
        let (_, max_rho) = scan_max(|t| rho(t), 0.0, TAU, 1024);
        Ok(Self {
            basepoint,
            rho,
            drho,
            label,
            max_rho,
        })
    }

    pub fn disc(center: [f64; 2], r: f64) -> Result<Self, GeometryError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(GeometryError::InvalidProfile(format!(
                "disc radius must be positive, got {r}"
            )));
        }
        Self::new(center, move |_| r, Some(Arc::new(|_| 0.0)), format!("disc(r={r})"))
    }

    /// Ellipse with semi-axes `a` (x) and `b` (y) about its centre.
    pub fn ellipse(center: [f64; 2], a: f64, b: f64) -> Result<Self, GeometryError> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(GeometryError::InvalidProfile(
                "ellipse semi-axes must be positive".into(),
            ));
        }
        let rho = move |t: f64| a * b / ((b * t.cos()).powi(2) + (a * t.sin()).powi(2)).sqrt();
        let drho = move |t: f64| {
            let q = (b * t.cos()).powi(2) + (a * t.sin()).powi(2);
            -0.5 * a * b * (a * a - b * b) * (2.0 * t).sin() / q.powf(1.5)
        };
        Self::new(center, rho, Some(Arc::new(drho)), format!("ellipse(a={a}, b={b})"))
    }

    /// `ρ(θ) = R(1 + eps·cos(mode·θ))` about the origin.
    pub fn perturbed_disc(r: f64, eps: f64, mode: u32) -> Result<Self, GeometryError> {
        if !(r.is_finite() && r > 0.0 && eps.is_finite() && eps.abs() < 1.0) {
            return Err(GeometryError::InvalidProfile("need R > 0 and |eps| < 1".into()));
        }
        if mode > 64 {
            return Err(GeometryError::InvalidProfile(format!(
                "mode must be at most 64, got {mode}"
            )));
        }
        let m = f64::from(mode);
        Self::new(
            [0.0, 0.0],
            move |t| r * (1.0 + eps * (m * t).cos()),
            Some(Arc::new(move |t| -r * eps * m * (m * t).sin())),
            format!("perturbed_disc(R={r}, eps={eps}, mode={mode})"),
        )
    }

    /// Periodic cubic spline through sampled radial values about `basepoint`.
    pub fn from_samples(
        basepoint: [f64; 2],
        theta: &[f64],
        r: &[f64],
        label: impl Into<String>,
    ) -> Result<Self, GeometryError> {
        let s = Arc::new(CubicSpline::periodic(theta, r).map_err(GeometryError::InvalidProfile)?);
        let s2 = s.clone();
        Self::new(
            basepoint,
            move |t| s.eval(t),
            Some(Arc::new(move |t| s2.deriv(t))),
            label,
        )
    }

    /// Meridian section `{(x, z) : |z| ≤ f(x)}` of a body of revolution,
    /// about `(argmax f, 0)`. Radial values come from boundary intersection.
    pub fn from_meridian(profile: &RevolutionProfile) -> Result<Self, GeometryError> {
        let p = profile.clone();
        let base = [profile.argmax(), 0.0];
        let reach = 2.0 * (profile.x_max() - profile.x_min()).hypot(profile.max_radius());
        let indicator = move |q: [f64; 2]| p.indicator([q[0], 0.0, q[1]]);
        Self::new(
            base,
            ray_exit(indicator, base, reach),
            None,
            format!("meridian of {}", profile.label()),
        )
    }

    /// The same body with its radial function taken about `basepoint`,
    /// which must be interior.
    pub fn rebased(&self, basepoint: [f64; 2]) -> Result<Self, GeometryError> {
        if self.indicator(basepoint) >= 0.0 {
            return Err(GeometryError::NotInterior);
        }
        let src = self.clone();
        let reach = 2.0 * (self.max_rho + norm(sub(basepoint, self.basepoint)));
        let indicator = move |q: [f64; 2]| src.indicator(q);
        Self::new(
            basepoint,
            ray_exit(indicator, basepoint, reach),
            None,
            self.label.clone(),
        )
    }

    /// Rigid motion: rotation by `angle` about the origin, then translation.
    pub fn transformed(&self, angle: f64, translation: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let b = self.basepoint;
        let basepoint = [
            c * b[0] - s * b[1] + translation[0],
            s * b[0] + c * b[1] + translation[1],
        ];
        let rho = self.rho.clone();
        let drho = self
            .drho
            .clone()
            .map(|d| Arc::new(move |t: f64| d(t - angle)) as ScalarFn);
        Self {
            basepoint,
            rho: Arc::new(move |t| rho(t - angle)),
            drho,
            label: self.label.clone(),
            max_rho: self.max_rho,
        }
    }

    /// Dilation by `lambda > 0` about the origin.
    pub fn scaled(&self, lambda: f64) -> Self {
        let rho = self.rho.clone();
        let drho = self
            .drho
            .clone()
            .map(|d| Arc::new(move |t: f64| lambda * d(t)) as ScalarFn);
        Self {
            basepoint: [lambda * self.basepoint[0], lambda * self.basepoint[1]],
            rho: Arc::new(move |t| lambda * rho(t)),
            drho,
            label: self.label.clone(),
            max_rho: lambda * self.max_rho,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn basepoint(&self) -> [f64; 2] {
        self.basepoint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_rho(&self) -> f64 {
        self.max_rho
    }

    pub fn rho(&self, theta: f64) -> f64 {
        (self.rho)(theta)
    }

    pub fn drho(&self, theta: f64) -> f64 {
        match &self.drho {
            Some(d) => d(theta),
            None => {
                let h = 1e-5;
                (self.rho(theta + h) - self.rho(theta - h)) / (2.0 * h)
            }
        }
    }

    /// `p + ρ(θ)(cos θ, sin θ)`.
    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        let r = self.rho(theta);
        [self.basepoint[0] + r * theta.cos(), self.basepoint[1] + r * theta.sin()]
    }

    /// Derivative of the boundary parametrization; points counterclockwise.
    pub fn tangent(&self, theta: f64) -> [f64; 2] {
        let r = self.rho(theta);
        let dr = self.drho(theta);
        let (s, c) = theta.sin_cos();
        [dr * c - r * s, dr * s + r * c]
    }

    /// Signed-curvature convexity test over a 4096-point boundary trace.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let n = 4096;
        let pts: Vec<[f64; 2]> = (0..n).map(|k| self.boundary_point(TAU * k as f64 / n as f64)).collect();
        let scale = self.max_rho * self.max_rho;
        for k in 0..n {
            let a = pts[k];
            let b = pts[(k + 1) % n];
            let c = pts[(k + 2) % n];
            let turn = cross2(sub(b, a), sub(c, b));
            if turn < -1e-12 * scale {
                return Err(GeometryError::InvalidProfile(format!(
                    "boundary turns clockwise near θ = {}",
                    TAU * (k + 1) as f64 / n as f64
                )));
            }
        }
        Ok(())
    }
}

impl Boundary<2> for PlanarBody {
    fn indicator(&self, p: [f64; 2]) -> f64 {
        let v = sub(p, self.basepoint);
        let r = norm(v);
        if r == 0.0 {
            return -self.rho(0.0);
        }
        r - self.rho(v[1].atan2(v[0]))
    }

    fn bounding_ball(&self) -> ([f64; 2], f64) {
        (self.basepoint, self.max_rho * (1.0 + 1e-6))
    }
}

/// Radial function of `body` about its basepoint.
pub fn radial(body: &PlanarBody, theta: f64) -> f64 {
    body.rho(theta)
}

/// Radial function obtained by intersecting rays from `base` with the zero
/// set of `indicator`.
fn ray_exit<I>(indicator: I, base: [f64; 2], reach: f64) -> impl Fn(f64) -> f64 + Send + Sync + 'static
where
    I: Fn([f64; 2]) -> f64 + Send + Sync + 'static,
{
    move |theta: f64| {
        let (s, c) = theta.sin_cos();
        let along = |l: f64| indicator([base[0] + l * c, base[1] + l * s]);
        bisect(along, 0.0, reach, 0.0).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_disc_radial_is_one() {
        let d = PlanarBody::disc([0.0, 0.0], 1.0).unwrap();
        for t in [0.0, 1.0, 4.0] {
            assert_eq!(radial(&d, t), 1.0);
        }
    }

    #[test]
    fn offset_basepoint_radial_values() {
        let d = PlanarBody::disc([0.0, 0.0], 2.0).unwrap().rebased([1.0, 0.0]).unwrap();
        assert!((radial(&d, 0.0) - 1.0).abs() < 1e-14);
        assert!((radial(&d, PI) - 3.0).abs() < 1e-14);
        assert!((radial(&d, PI / 2.0) - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rebasing_outside_fails() {
        let d = PlanarBody::disc([0.0, 0.0], 1.0).unwrap();
        assert_eq!(d.rebased([2.0, 0.0]).unwrap_err(), GeometryError::NotInterior);
    }

    #[test]
    fn ellipse_radial_and_derivative() {
        let e = PlanarBody::ellipse([0.0, 0.0], 2.0, 1.0).unwrap();
        assert!((e.rho(0.0) - 2.0).abs() < 1e-15);
        assert!((e.rho(PI / 2.0) - 1.0).abs() < 1e-15);
        for t in [0.3, 1.1, 2.5, 5.0] {
            let h = 1e-6;
            let fd = (e.rho(t + h) - e.rho(t - h)) / (2.0 * h);
            assert!((e.drho(t) - fd).abs() < 1e-8);
        }
        e.validate().unwrap();
    }

    #[test]
    fn star_shaped_nonconvex_body_fails_validation() {
        let p = PlanarBody::perturbed_disc(1.0, 0.4, 5).unwrap();
        assert!(p.validate().is_err());
        PlanarBody::perturbed_disc(1.0, 0.01, 3).unwrap().validate().unwrap();
    }

    #[test]
    fn meridian_of_ball_is_disc() {
        let m = PlanarBody::from_meridian(&RevolutionProfile::ball(2.0).unwrap()).unwrap();
        for t in [0.0, 0.7, 2.0, 4.4] {
            assert!((m.rho(t) - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_nonpositive_radial_function() {
        assert!(PlanarBody::new([0.0, 0.0], |t: f64| t.cos(), None, "bad").is_err());
        assert!(PlanarBody::disc([0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn transform_moves_basepoint_and_rotates() {
        let e = PlanarBody::ellipse([1.0, 0.0], 2.0, 1.0).unwrap();
        let r = e.transformed(PI / 2.0, [0.0, 1.0]);
        let b = r.basepoint();
        assert!(b[0].abs() < 1e-15 && (b[1] - 2.0).abs() < 1e-15);
        assert!((r.rho(PI / 2.0) - 2.0).abs() < 1e-14);
    }
}
