use super::{Direction, GeometryError, RevolutionProfile};
use crate::numeric::{bisect, bisect_predicate};

/// Supporting line `ℓ(s) = {(ξ, 0, sξ + h(s))}` of an inner body of
/// revolution, tangent to its profile at `(a(s), 0, g(a(s)))`, together with
/// the plane `H_s` spanned by `ℓ(s)` and the y-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentFrame {
    pub slope: f64,
    pub tangency_x: f64,
    pub tangency_height: f64,
    pub intercept: f64,
}

impl TangentFrame {
    /// Angle `α = arctan s` between ℓ(s) and the axis.
    pub fn alpha(&self) -> f64 {
        self.slope.atan()
    }

    pub fn tangency_point(&self) -> [f64; 3] {
        [self.tangency_x, 0.0, self.tangency_height]
    }

    /// Unit vector along ℓ(s).
    pub fn line_direction(&self) -> Direction<3> {
        let n = self.slope.hypot(1.0);
        Direction::new([1.0 / n, 0.0, self.slope / n]).expect("finite slope")
    }

    /// Unit vector of `H_s` at angle `phi` from ℓ(s) towards the y-axis.
    pub fn in_plane_direction(&self, phi: f64) -> Direction<3> {
        let l = self.line_direction().components();
        let (s, c) = phi.sin_cos();
        Direction::new([c * l[0], s, c * l[2]]).expect("unit combination")
    }
}

/// Finds the point where the inner profile has slope `s` by monotone bisection
/// on its (decreasing) derivative.
pub fn tangent_frame(inner: &RevolutionProfile, s: f64) -> Result<TangentFrame, GeometryError> {
    let w = inner.x_max() - inner.x_min();
    let lo = inner.x_min() + 1e-12 * w;
    let hi = inner.x_max() - 1e-12 * w;
    let d_left = inner.derivative(lo);
    let d_right = inner.derivative(hi);
    if !(s.is_finite() && s < d_left && s > d_right) {
        return Err(GeometryError::NoTangency {
            slope: s,
            min: d_right,
            max: d_left,
        });
    }
    let a = bisect_predicate(|x| inner.derivative(x) > s, lo, hi, 0.0);
    let probe = 1e-3 * w;
    // A segment through the tangency point shows up as a one-sided plateau of g'.
    let thresh = 1e-12 * (1.0 + s.abs());
    let left = inner.derivative((a - probe).max(lo)) - s;
    let right = s - inner.derivative((a + probe).min(hi));
    if !(left > thresh && right > thresh) {
        return Err(GeometryError::FlatBoundary { x: a });
    }
    let g = inner.radius(a);
    Ok(TangentFrame {
        slope: s,
        tangency_x: a,
        tangency_height: g,
        intercept: g - s * a,
    })
}

/// Boundary of the tilted section `K ∩ H_s`, written as `y = ±ψ(u)` with `u`
/// the arclength coordinate along ℓ(s) measured from the tangency point.
#[derive(Debug, Clone)]
pub struct SectionProfile {
    outer: RevolutionProfile,
    frame: TangentFrame,
    x_left: f64,
    x_right: f64,
}

impl SectionProfile {
    fn stretch(&self) -> f64 {
        self.frame.slope.hypot(1.0)
    }

    /// `f²(a + x) − (g(a) + xs)²` in the axial parameter `x`.
    pub fn excess(&self, x: f64) -> f64 {
        excess(&self.outer, &self.frame, x)
    }

    /// `ψ(u)`, zero outside the support.
    pub fn psi(&self, u: f64) -> f64 {
        let x = u / self.stretch();
        if x < self.x_left || x > self.x_right {
            return 0.0;
        }
        self.excess(x).max(0.0).sqrt()
    }

    pub fn halfwidth_left(&self) -> f64 {
        -self.x_left * self.stretch()
    }

    pub fn halfwidth_right(&self) -> f64 {
        self.x_right * self.stretch()
    }

    pub fn frame(&self) -> &TangentFrame {
        &self.frame
    }

    /// Squared distance from the tangency point to the boundary point of the
    /// section above axial parameter `x`.
    pub fn radius_sq_at(&self, x: f64) -> f64 {
        let s = self.frame.slope;
        x * x * (1.0 + s * s) + self.excess(x).max(0.0)
    }

    /// Radial function of the section about the tangency point, for the
    /// in-plane direction at angle `phi` from ℓ(s).
    pub fn radial(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let reach = 2.0 * (self.halfwidth_left().max(self.halfwidth_right()) + self.outer.max_radius());
        bisect(|l| l * s.abs() - self.psi(l * c), 0.0, reach, 0.0).unwrap_or(0.0)
    }
}

fn excess(outer: &RevolutionProfile, frame: &TangentFrame, x: f64) -> f64 {
    let f = outer.radius(frame.tangency_x + x);
    let z = frame.tangency_height + x * frame.slope;
    f * f - z * z
}

/// Support of the tilted section by bisection on the sign of the excess.
pub fn section_profile(outer: &RevolutionProfile, frame: &TangentFrame) -> Result<SectionProfile, GeometryError> {
    let e = |x: f64| excess(outer, frame, x);
    if e(0.0) < 0.0 {
        return Err(GeometryError::EmptySection);
    }
    let right_end = (outer.x_max() - frame.tangency_x).max(0.0);
    let left_end = (outer.x_min() - frame.tangency_x).min(0.0);
    let x_right = bisect_predicate(|x| e(x) >= 0.0, 0.0, right_end, 0.0);
    let x_left = -bisect_predicate(|x| e(-x) >= 0.0, 0.0, -left_end, 0.0);
    Ok(SectionProfile {
        outer: outer.clone(),
        frame: *frame,
        x_left,
        x_right,
    })
}
