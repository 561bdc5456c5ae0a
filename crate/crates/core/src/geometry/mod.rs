//! Convex bodies of revolution and planar star bodies, tangent frames to an
//! inner body, and chord geometry.
//!
//! Revolution bodies live in ℝ³ with the x-axis as axis of revolution; their
//! meridian profile `η = f(ξ)` is a [`RevolutionProfile`]. Planar bodies are
//! described by a radial function about an interior basepoint
//! ([`PlanarBody`]). Both expose a signed boundary indicator through
//! [`Boundary`], which is all the chord machinery needs.

mod chord;
mod frame;
mod planar;
mod profile;
pub mod spline;

pub use chord::{chord_endpoints, Chord};
pub use frame::{section_profile, tangent_frame, SectionProfile, TangentFrame};
pub use planar::{radial, PlanarBody};
pub use profile::RevolutionProfile;

use thiserror::Error;

/// Errors raised by geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("no tangency: slope {slope} is outside the derivative range [{min}, {max}] of the inner profile")]
    NoTangency { slope: f64, min: f64, max: f64 },
    #[error("flat boundary: the inner profile has constant slope near x = {x}")]
    FlatBoundary { x: f64 },
    #[error("no intersection: the line misses the body")]
    NoIntersection,
    #[error("degenerate chord: the line only touches the body")]
    DegenerateChord,
    #[error("convexity violation: the line crosses the boundary {crossings} times")]
    ConvexityViolation { crossings: usize },
    #[error("empty section: the tangency point lies above the outer profile")]
    EmptySection,
    #[error("base point is not interior to the body")]
    NotInterior,
    #[error("invalid direction: zero or non-finite vector")]
    BadDirection,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

/// A body described by a signed boundary indicator: negative inside,
/// positive outside, zero on the boundary.
pub trait Boundary<const D: usize> {
    fn indicator(&self, p: [f64; D]) -> f64;

    /// Centre and radius of a ball containing the body.
    fn bounding_ball(&self) -> ([f64; D], f64);

    fn contains(&self, p: [f64; D]) -> bool {
        self.indicator(p) <= 0.0
    }
}

/// Unit vector in ℝᴰ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<const D: usize>([f64; D]);

impl<const D: usize> Direction<D> {
    /// Normalizes `v`; fails on zero or non-finite input.
    pub fn new(v: [f64; D]) -> Result<Self, GeometryError> {
        let n = norm(v);
        if !n.is_finite() || n == 0.0 {
            return Err(GeometryError::BadDirection);
        }
        Ok(Self(scale(v, 1.0 / n)))
    }

    pub fn components(&self) -> [f64; D] {
        self.0
    }

    pub fn neg(&self) -> Self {
        Self(scale(self.0, -1.0))
    }
}

impl Direction<2> {
    pub fn from_angle(theta: f64) -> Self {
        Self([theta.cos(), theta.sin()])
    }

    /// `n` evenly spaced directions starting at angle 0.
    pub fn uniform_circle(n: usize) -> Vec<Self> {
        (0..n)
            .map(|k| Self::from_angle(std::f64::consts::TAU * k as f64 / n as f64))
            .collect()
    }
}

impl Direction<3> {
    /// Offset Fibonacci lattice on the unit sphere with both poles added.
    /// The plain lattice leaves its widest hole at the poles.
    pub fn fibonacci_sphere(n: usize) -> Vec<Self> {
        const OFFSET: f64 = 0.36;
        if n < 3 {
            return [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
                .into_iter()
                .take(n)
                .map(Self)
                .collect();
        }
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let span = (n - 3) as f64 + 2.0 * OFFSET;
        let mut out = Vec::with_capacity(n);
        out.push(Self([0.0, 0.0, 1.0]));
        out.extend((1..n - 1).map(|k| {
            let z = 1.0 - 2.0 * ((k - 1) as f64 + OFFSET) / span;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Self([r * phi.cos(), r * phi.sin(), z])
        }));
        out.push(Self([0.0, 0.0, -1.0]));
        out
    }
}

pub(crate) fn dot<const D: usize>(a: [f64; D], b: [f64; D]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm<const D: usize>(a: [f64; D]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub<const D: usize>(a: [f64; D], b: [f64; D]) -> [f64; D] {
    std::array::from_fn(|i| a[i] - b[i])
}

pub(crate) fn scale<const D: usize>(a: [f64; D], s: f64) -> [f64; D] {
    std::array::from_fn(|i| a[i] * s)
}

pub(crate) fn axpy<const D: usize>(p: [f64; D], t: f64, v: [f64; D]) -> [f64; D] {
    std::array::from_fn(|i| p[i] + t * v[i])
}

pub(crate) fn dist<const D: usize>(a: [f64; D], b: [f64; D]) -> f64 {
    norm(sub(a, b))
}

pub(crate) fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_is_unit() {
        let d = Direction::new([3.0, 4.0, 12.0]).unwrap();
        assert!((norm(d.components()) - 1.0).abs() < 1e-12);
        assert_eq!(Direction::new([0.0, 0.0]), Err(GeometryError::BadDirection));
        assert!(Direction::new([f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn fibonacci_points_are_unit_and_balanced() {
        let dirs = Direction::fibonacci_sphere(500);
        let mut sum = [0.0; 3];
        for d in &dirs {
            assert!((norm(d.components()) - 1.0).abs() < 1e-12);
            sum = axpy(sum, 1.0, d.components());
        }
        assert!(norm(sum) / 500.0 < 1e-2);
    }
}
