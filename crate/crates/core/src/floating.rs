//! Cutting hyperplanes, convex floating bodies and floating equilibrium.
//!
//! A cut in direction `ξ` at level `t` is the halfspace `{p·ξ ≤ t}` (the
//! submerged side). Its complement `H⁺(ξ) = {p·ξ ≥ t}` is the side kept by the
//! convex floating body `K_δ = ⋂ H⁺(ξ)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Boundary, Direction, PlanarBody, RevolutionProfile};
use crate::numeric::{adaptive_simpson, bisect, golden_min, illinois, piecewise_simpson, scan_roots};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloatError {
    #[error("bad cut: volume {delta} is outside (0, {volume})")]
    BadDelta { delta: f64, volume: f64 },
    #[error("empty floating body: the centroid lies outside the halfspace of direction {direction}")]
    EmptyFloatingBody { direction: usize },
    #[error("too few directions: need at least {min}, got {got}")]
    TooFewDirections { min: usize, got: usize },
}

/// Volume cut off from the body, either absolute or as a fraction of the
/// body's volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutSpec {
    Absolute(f64),
    Fraction(f64),
}

/// A cut resolved against a particular body; both conventions are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedCut {
    pub delta: f64,
    pub fraction: f64,
    pub volume: f64,
}

impl CutSpec {
    pub fn resolve(&self, volume: f64) -> Result<ResolvedCut, FloatError> {
        let delta = match *self {
            CutSpec::Absolute(d) => d,
            CutSpec::Fraction(f) => f * volume,
        };
        if !(delta > 0.0 && delta < volume) {
            return Err(FloatError::BadDelta { delta, volume });
        }
        if delta > 0.5 * volume {
            log::warn!("cut volume {delta} exceeds half the body volume {volume}; the floating body may be empty");
        }
        Ok(ResolvedCut {
            delta,
            fraction: delta / volume,
            volume,
        })
    }
}

/// A convex body whose caps `K ∩ {p·ξ ≤ t}` can be integrated.
pub trait Solid<const D: usize>: Boundary<D> + Sync {
    /// Volume and first moment (about the origin) of `K ∩ {p·ξ ≤ t}`.
    fn cap_moments(&self, xi: &Direction<D>, t: f64) -> (f64, [f64; D]);

    /// Volume and first moment of the whole body.
    fn moments(&self) -> (f64, [f64; D]);

    /// Deterministic quasi-uniform direction grid.
    fn direction_grid(n: usize) -> Vec<Direction<D>>
    where
        Self: Sized;

    fn volume(&self) -> f64 {
        self.moments().0
    }

    fn centroid(&self) -> [f64; D] {
        let (v, m) = self.moments();
        m.map(|c| c / v)
    }
}

/// Absolute quadrature tolerance relative to the bounding-ball volume scale.
fn quad_tol<const D: usize, S: Boundary<D> + ?Sized>(body: &S) -> f64 {
    let r = body.bounding_ball().1;
    1e-12 * r.powi(D as i32)
}

/// Area of the part `{u ≤ c}` of a disc of radius `rho` (u a coordinate
/// through the centre) and its first moment in `u`.
fn disc_segment(rho: f64, c: f64) -> (f64, f64) {
    if rho <= 0.0 || c <= -rho {
        return (0.0, 0.0);
    }
    if c >= rho {
        return (PI * rho * rho, 0.0);
    }
    let h = (rho * rho - c * c).max(0.0);
    let area = rho * rho * (PI - (c / rho).acos()) + c * h.sqrt();
    let moment = -2.0 / 3.0 * h * h.sqrt();
    (area, moment)
}

impl Solid<3> for RevolutionProfile {
    fn cap_moments(&self, xi: &Direction<3>, t: f64) -> (f64, [f64; 3]) {
        let [ex, ey, ez] = xi.components();
        let n = ey.hypot(ez);
        let (a, b) = (self.x_min(), self.x_max());
        // Offset of the cutting line within the disc slice at x.
        let level = |x: f64| -> f64 {
            if n > 0.0 {
                (t - x * ex) / n
            } else if x * ex <= t {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        };
        let (uy, uz) = if n > 0.0 { (ey / n, ez / n) } else { (0.0, 0.0) };
        let integrand = |x: f64| {
            let (area, m) = disc_segment(self.radius(x), level(x));
            [area, x * area, m * uy, m * uz]
        };

        // Breakpoints where the cutting plane enters or leaves a slice:
        // level − f is convex and level + f concave, so each has at most two roots.
        let mut breaks = Vec::new();
        if n > 0.0 {
            let tol = 1e-15 * (b - a);
            let lower = |x: f64| level(x) - self.radius(x);
            let (xm, m) = golden_min(lower, a, b, tol);
            if m < 0.0 {
                breaks.extend(bisect(lower, a, xm, 0.0));
                breaks.extend(bisect(lower, xm, b, 0.0));
            }
            let upper = |x: f64| -(level(x) + self.radius(x));
            let (xm, m) = golden_min(upper, a, b, tol);
            if m < 0.0 {
                breaks.extend(bisect(upper, a, xm, 0.0));
                breaks.extend(bisect(upper, xm, b, 0.0));
            }
        } else {
            breaks.push(t / ex);
        }
        let r = piecewise_simpson(&integrand, a, b, &breaks, quad_tol(self));
        (r[0], [r[1], r[2], r[3]])
    }

    fn moments(&self) -> (f64, [f64; 3]) {
        let f = |x: f64| {
            let r = self.radius(x);
            let area = PI * r * r;
            [area, x * area]
        };
        let r = adaptive_simpson(&f, self.x_min(), self.x_max(), quad_tol(self));
        (r[0], [r[1], 0.0, 0.0])
    }

    fn direction_grid(n: usize) -> Vec<Direction<3>> {
        Direction::fibonacci_sphere(n)
    }
}

impl Solid<2> for PlanarBody {
    fn cap_moments(&self, xi: &Direction<2>, t: f64) -> (f64, [f64; 2]) {
        let p0 = self.basepoint();
        let xi = xi.components();
        let s0 = t - (p0[0] * xi[0] + p0[1] * xi[1]);
        // Radial extent [λa, λb] of the cap along the ray at angle θ.
        let span = |theta: f64| -> (f64, f64) {
            let rho = self.rho(theta);
            let k = theta.cos() * xi[0] + theta.sin() * xi[1];
            if k > 0.0 {
                (0.0, (s0 / k).clamp(0.0, rho))
            } else if k < 0.0 {
                ((s0 / k).clamp(0.0, rho), rho)
            } else if s0 >= 0.0 {
                (0.0, rho)
            } else {
                (0.0, 0.0)
            }
        };
        let integrand = |theta: f64| {
            let (la, lb) = span(theta);
            let area = 0.5 * (lb * lb - la * la);
            let m = (lb * lb * lb - la * la * la) / 3.0;
            [area, m * theta.cos(), m * theta.sin()]
        };
        let crossing = |theta: f64| self.rho(theta) * (theta.cos() * xi[0] + theta.sin() * xi[1]) - s0;
        let breaks = scan_roots(crossing, 0.0, TAU, 256);
        let r = piecewise_simpson(&integrand, 0.0, TAU, &breaks, quad_tol(self));
        (r[0], [r[1] + p0[0] * r[0], r[2] + p0[1] * r[0]])
    }

    fn moments(&self) -> (f64, [f64; 2]) {
        let p0 = self.basepoint();
        let f = |theta: f64| {
            let rho = self.rho(theta);
            let m = rho * rho * rho / 3.0;
            [0.5 * rho * rho, m * theta.cos(), m * theta.sin()]
        };
        let r = adaptive_simpson(&f, 0.0, TAU, quad_tol(self));
        (r[0], [r[1] + p0[0] * r[0], r[2] + p0[1] * r[0]])
    }

    fn direction_grid(n: usize) -> Vec<Direction<2>> {
        Direction::uniform_circle(n)
    }
}

/// `vol(K ∩ {p·ξ ≤ t})`.
pub fn cap_volume<const D: usize, S: Solid<D> + ?Sized>(body: &S, xi: &Direction<D>, t: f64) -> f64 {
    body.cap_moments(xi, t).0
}

fn level_for<const D: usize, S: Solid<D> + ?Sized>(body: &S, xi: &Direction<D>, delta: f64, volume: f64) -> f64 {
    let (c, r) = body.bounding_ball();
    let mid: f64 = c.iter().zip(xi.components()).map(|(a, b)| a * b).sum();
    let g = |t: f64| cap_volume(body, xi, t) - delta;
    illinois(g, mid - 1.001 * r, mid + 1.001 * r, 1e-13 * volume).expect("cap volume brackets the cut")
}

/// Level `t` of the hyperplane orthogonal to `ξ` cutting off the requested
/// volume.
pub fn cutting_level<const D: usize, S: Solid<D> + ?Sized>(
    body: &S,
    xi: &Direction<D>,
    cut: CutSpec,
) -> Result<f64, FloatError> {
    let rc = cut.resolve(body.volume())?;
    Ok(level_for(body, xi, rc.delta, rc.volume))
}

/// Centroid of the submerged part `K ∩ {p·ξ ≤ t(ξ)}`.
pub fn submerged_centroid<const D: usize, S: Solid<D> + ?Sized>(
    body: &S,
    xi: &Direction<D>,
    cut: CutSpec,
) -> Result<[f64; D], FloatError> {
    let rc = cut.resolve(body.volume())?;
    let t = level_for(body, xi, rc.delta, rc.volume);
    let (v, m) = body.cap_moments(xi, t);
    Ok(m.map(|c| c / v))
}

/// Halfspace description of `K_δ` on a direction grid, with boundary points
/// found by shooting rays from the body centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatingBodyApprox<const D: usize> {
    pub directions: Vec<Direction<D>>,
    /// `t(ξ)`; the kept halfspace is `{p·ξ ≥ t(ξ)}`.
    pub levels: Vec<f64>,
    /// Boundary point of the intersection along the ray `−ξ_k` from the centroid.
    pub inner_points: Vec<[f64; D]>,
    pub centroid: [f64; D],
    pub cut: ResolvedCut,
}

impl<const D: usize> FloatingBodyApprox<D> {
    /// Smallest `p·ξ − t(ξ)` over all inner points and halfspaces of `other`.
    pub fn min_slack_in(&self, other: &FloatingBodyApprox<D>) -> f64 {
        let mut worst = f64::INFINITY;
        for p in &self.inner_points {
            for (xi, t) in other.directions.iter().zip(&other.levels) {
                worst = worst.min(dot(*p, xi.components()) - t);
            }
        }
        worst
    }
}

fn dot<const D: usize>(a: [f64; D], b: [f64; D]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

pub fn convex_floating_body<const D: usize, S: Solid<D>>(
    body: &S,
    cut: CutSpec,
    n_dirs: usize,
) -> Result<FloatingBodyApprox<D>, FloatError> {
    if n_dirs < 2 * D {
        return Err(FloatError::TooFewDirections {
            min: 2 * D,
            got: n_dirs,
        });
    }
    let (volume, moment) = body.moments();
    let rc = cut.resolve(volume)?;
    let centroid = moment.map(|c| c / volume);
    let directions = S::direction_grid(n_dirs);
    let levels: Vec<f64> = directions
        .par_iter()
        .map(|xi| level_for(body, xi, rc.delta, volume))
        .collect();

    let scale = body.bounding_ball().1;
    let slack: Vec<f64> = directions
        .iter()
        .zip(&levels)
        .map(|(xi, t)| dot(centroid, xi.components()) - t)
        .collect();
    if let Some(k) = slack.iter().position(|s| *s < -1e-12 * scale) {
        return Err(FloatError::EmptyFloatingBody { direction: k });
    }
    let inner_points = directions
        .par_iter()
        .map(|u| {
            let u = u.neg().components();
            let mut lambda = f64::INFINITY;
            for (xi, s) in directions.iter().zip(&slack) {
                let k = -dot(u, xi.components());
                if k > 0.0 {
                    lambda = lambda.min(s.max(0.0) / k);
                }
            }
            std::array::from_fn(|i| centroid[i] + lambda * u[i])
        })
        .collect();
    Ok(FloatingBodyApprox {
        directions,
        levels,
        inner_points,
        centroid,
        cut: rc,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DupinReport {
    /// `|vol(cap at the supporting level) − δ| / vol(K)` per direction.
    pub mismatches: Vec<f64>,
    pub max_mismatch: f64,
    /// Directions whose mismatch exceeds the tolerance.
    pub flagged: Vec<usize>,
    pub tolerance: f64,
}

/// Checks that each supporting hyperplane of the approximation (outer normal
/// `−ξ`) cuts off volume `δ`.
pub fn dupin_check<const D: usize, S: Solid<D> + ?Sized>(
    body: &S,
    approx: &FloatingBodyApprox<D>,
    tolerance: f64,
) -> DupinReport {
    let rc = approx.cut;
    let mismatches: Vec<f64> = approx
        .directions
        .par_iter()
        .map(|xi| {
            let xi_c = xi.components();
            let support = approx
                .inner_points
                .iter()
                .map(|p| dot(*p, xi_c))
                .fold(f64::INFINITY, f64::min);
            (cap_volume(body, xi, support) - rc.delta).abs() / rc.volume
        })
        .collect();
    let max_mismatch = mismatches.iter().copied().fold(0.0, f64::max);
    let flagged = mismatches
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > tolerance)
        .map(|(k, _)| k)
        .collect();
    DupinReport {
        mismatches,
        max_mismatch,
        flagged,
        tolerance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport<const D: usize> {
    pub direction: Direction<D>,
    pub level: f64,
    pub submerged_centroid: [f64; D],
    pub body_centroid: [f64; D],
    /// Component of `𝒞_δ(ξ) − 𝒞(K)` orthogonal to `ξ`, relative to its length.
    pub residual: f64,
    /// The two centroids coincide and the residual is undefined (reported as 0).
    pub centroid_coincidence: bool,
}

pub fn equilibrium_scan<const D: usize, S: Solid<D>>(
    body: &S,
    cut: CutSpec,
    n_dirs: usize,
) -> Result<Vec<EquilibriumReport<D>>, FloatError> {
    if n_dirs < 8 {
        return Err(FloatError::TooFewDirections { min: 8, got: n_dirs });
    }
    let (volume, moment) = body.moments();
    let rc = cut.resolve(volume)?;
    let body_centroid = moment.map(|c| c / volume);
    let dirs = S::direction_grid(n_dirs);
    Ok(dirs
        .par_iter()
        .map(|xi| {
            let t = level_for(body, xi, rc.delta, volume);
            let (v, m) = body.cap_moments(xi, t);
            let sub = m.map(|c| c / v);
            let diff: [f64; D] = std::array::from_fn(|i| sub[i] - body_centroid[i]);
            let len = dot(diff, diff).sqrt();
            let (residual, coincident) = if len < 1e-12 {
                (0.0, true)
            } else {
                let along = dot(diff, xi.components());
                let orth: [f64; D] = std::array::from_fn(|i| diff[i] - along * xi.components()[i]);
                ((dot(orth, orth).sqrt() / len).min(1.0), false)
            };
            EquilibriumReport {
                direction: *xi,
                level: t,
                submerged_centroid: sub,
                body_centroid,
                residual,
                centroid_coincidence: coincident,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_ball() -> RevolutionProfile {
        RevolutionProfile::ball(1.0).unwrap()
    }

    fn unit_disc() -> PlanarBody {
        PlanarBody::disc([0.0, 0.0], 1.0).unwrap()
    }

    fn up2() -> Direction<2> {
        Direction::new([0.0, 1.0]).unwrap()
    }

    #[test]
    fn segment_formula_limits() {
        assert_eq!(disc_segment(1.0, -2.0), (0.0, 0.0));
        assert!((disc_segment(1.0, 0.0).0 - PI / 2.0).abs() < 1e-15);
        assert!((disc_segment(1.0, 0.0).1 + 2.0 / 3.0).abs() < 1e-15);
        assert!((disc_segment(2.0, 5.0).0 - 4.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn half_ball_volume_any_direction() {
        let b = unit_ball();
        for d in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.3, -0.5, 0.8]] {
            let v = cap_volume(&b, &Direction::new(d).unwrap(), 0.0);
            assert!((v - 2.0 * PI / 3.0).abs() < 1e-10, "{d:?} {v}");
        }
        assert!((b.volume() - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn disc_caps() {
        let d = unit_disc();
        assert!((cap_volume(&d, &up2(), 0.0) - PI / 2.0).abs() < 1e-10);
        let oracle = PI - (0.5f64.acos() - 0.5 * 0.75f64.sqrt());
        assert!((cap_volume(&d, &up2(), 0.5) - oracle).abs() < 1e-10);
        assert_eq!(cap_volume(&d, &up2(), -1.5), 0.0);
        assert!((cap_volume(&d, &up2(), 1.5) - PI).abs() < 1e-10);
    }

    #[test]
    fn cutting_levels() {
        let b = unit_ball();
        let z = Direction::new([0.0, 0.0, 1.0]).unwrap();
        assert!(cutting_level(&b, &z, CutSpec::Fraction(0.5)).unwrap().abs() < 1e-10);
        let t = cutting_level(&unit_disc(), &up2(), CutSpec::Absolute(PI / 4.0)).unwrap();
        assert!((t + 0.4040).abs() < 1e-4);
        assert!(matches!(
            cutting_level(&b, &z, CutSpec::Absolute(4.0 * PI / 3.0)),
            Err(FloatError::BadDelta { .. })
        ));
    }

    #[test]
    fn half_body_centroids() {
        let c = submerged_centroid(&unit_disc(), &up2(), CutSpec::Absolute(PI / 2.0)).unwrap();
        assert!(c[0].abs() < 1e-10);
        assert!((c[1] + 4.0 / (3.0 * PI)).abs() < 1e-9);
        let z = Direction::new([0.0, 0.0, 1.0]).unwrap();
        let c = submerged_centroid(&unit_ball(), &z, CutSpec::Absolute(2.0 * PI / 3.0)).unwrap();
        assert!((c[2] + 0.375).abs() < 1e-9 && c[0].abs() < 1e-9);
    }

    #[test]
    fn centroid_limit_of_full_cut() {
        let e = PlanarBody::ellipse([0.3, -0.2], 2.0, 1.0).unwrap();
        let xi = Direction::new([1.0, 1.0]).unwrap();
        let c = submerged_centroid(&e, &xi, CutSpec::Fraction(0.9999)).unwrap();
        let k = e.centroid();
        assert!((c[0] - k[0]).hypot(c[1] - k[1]) < 1e-3);
    }

    #[test]
    fn floating_body_of_disc_contains_centre() {
        let a = convex_floating_body(&unit_disc(), CutSpec::Fraction(0.49), 64).unwrap();
        for p in &a.inner_points {
            assert!(p[0].hypot(p[1]) < 0.1);
        }
        assert!(a.inner_points.iter().all(|p| unit_disc().contains(*p)));
    }

    #[test]
    fn dupin_on_disc() {
        let a = convex_floating_body(&unit_disc(), CutSpec::Fraction(0.25), 360).unwrap();
        let r = dupin_check(&unit_disc(), &a, 1e-6);
        assert!(r.max_mismatch < 1e-5, "{}", r.max_mismatch);
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn too_few_directions() {
        assert!(matches!(
            convex_floating_body(&unit_disc(), CutSpec::Fraction(0.1), 3),
            Err(FloatError::TooFewDirections { .. })
        ));
        assert!(equilibrium_scan(&unit_disc(), CutSpec::Fraction(0.1), 4).is_err());
    }

    #[test]
    fn disc_equilibrium_everywhere() {
        let reps = equilibrium_scan(&unit_disc(), CutSpec::Fraction(0.3), 36).unwrap();
        assert!(reps.iter().all(|r| r.residual < 1e-8));
    }

    #[test]
    fn half_cut_of_centred_ball_coincides() {
        // fraction 0.5 of a symmetric body: submerged centroid is off-centre,
        // so no coincidence flag.
        let reps = equilibrium_scan(&unit_disc(), CutSpec::Fraction(0.5), 8).unwrap();
        assert!(reps.iter().all(|r| !r.centroid_coincidence));
    }
}
