//! Numerical tools for equichordal pairs of convex bodies.
//!
//! * [`geometry`]: bodies of revolution, planar bodies, tangent frames, chords.
//! * [`equichordal`]: checks whether a nested pair is i-equichordal.
//! * [`floating`]: cutting levels, convex floating bodies, floating equilibrium.
//! * [`billiard`]: the tangent-chord billiard around an inner body.
//! * [`revolution`]: the χ-function of a body of revolution and the identities
//!   an equichordal pair must satisfy, plus the moving-chord reconstruction.
//! * [`spec`]: JSON body specifications.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod billiard;
pub mod equichordal;
pub mod floating;
pub mod geometry;
pub mod numeric;
pub mod revolution;
pub mod spec;
