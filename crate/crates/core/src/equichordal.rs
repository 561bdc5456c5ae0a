//! Numerical test of the i-equichordal property for a pair of nested convex
//! bodies: every chord of the outer body tangent to the inner one is split by
//! its tangency point into pieces whose i-th powers sum to the same constant.

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{
    chord_endpoints, tangent_frame, Boundary, Chord, Direction, GeometryError, PlanarBody, RevolutionProfile,
    TangentFrame,
};
use crate::numeric::median;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("inner body not contained: tangency point {point:?} of frame {frame} is not interior to the outer body")]
    InnerNotContained { frame: usize, point: Vec<f64> },
    #[error("invalid check configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    /// Exponent `i`; zero selects the product of the two distances.
    pub power: f64,
    pub dimension: usize,
    pub num_frames: usize,
    pub num_section_dirs: usize,
    pub tolerance: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            power: 4.0,
            dimension: 3,
            num_frames: 256,
            num_section_dirs: 128,
            tolerance: 1e-6,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), CheckError> {
        if !self.power.is_finite() {
            return Err(CheckError::BadConfig(format!(
                "power must be finite, got {}",
                self.power
            )));
        }
        if self.dimension < 2 {
            return Err(CheckError::BadConfig(format!(
                "dimension must be at least 2, got {}",
                self.dimension
            )));
        }
        if self.num_frames < 2 {
            return Err(CheckError::BadConfig(format!(
                "need at least 2 frames, got {}",
                self.num_frames
            )));
        }
        if self.num_section_dirs < 1 {
            return Err(CheckError::BadConfig("need at least 1 section direction".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CheckError::BadConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// One evaluated chord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub frame_index: usize,
    /// Angle of the supporting line with the x-axis.
    pub alpha: f64,
    /// Tangency abscissa `a(s)` for revolution pairs, boundary parameter for
    /// planar pairs.
    pub a_s: f64,
    pub value: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub constant_estimate: f64,
    pub max_deviation: f64,
    pub worst_frame: TangentFrame,
    /// Median value of each frame, in grid order.
    pub per_frame_values: Vec<f64>,
    /// Largest within-frame spread (max − min); small spread with a large
    /// `max_deviation` means each section is equichordal with its own constant.
    pub max_frame_spread: f64,
    pub samples: Vec<FrameSample>,
    pub tolerance: f64,
}

impl CheckReport {
    /// `max_deviation ≤ tolerance·max(1, c)`.
    pub fn satisfied(&self) -> bool {
        self.max_deviation <= self.tolerance * self.constant_estimate.abs().max(1.0)
    }

    pub fn worst_sample(&self) -> Option<&FrameSample> {
        self.samples.iter().max_by(|a, b| a.deviation.total_cmp(&b.deviation))
    }
}

/// `d₊ⁱ + d₋ⁱ`, or `d₊·d₋` when `i = 0`.
pub fn chord_power_value<const D: usize>(chord: &Chord<D>, power: f64) -> f64 {
    power_value(chord.dist_plus, chord.dist_minus, power)
}

pub(crate) fn power_value(a: f64, b: f64, power: f64) -> f64 {
    if power == 0.0 {
        a * b
    } else {
        a.powf(power) + b.powf(power)
    }
}

/// Relative position of the tangency point along the chord, measured from
/// `zeta_minus`.
pub fn midpoint_ratio<const D: usize>(chord: &Chord<D>) -> f64 {
    chord.dist_minus / (chord.dist_plus + chord.dist_minus)
}

/// Frame angles `α_k`, midpoints of a uniform partition of the open angle
/// range of the inner profile's supporting lines.
pub fn frame_grid(inner: &RevolutionProfile, num_frames: usize) -> Vec<f64> {
    let w = inner.x_max() - inner.x_min();
    let hi = inner.derivative(inner.x_min() + 1e-12 * w).atan();
    let lo = inner.derivative(inner.x_max() - 1e-12 * w).atan();
    (0..num_frames)
        .map(|k| lo + (k as f64 + 0.5) * (hi - lo) / num_frames as f64)
        .collect()
}

/// Checks a pair of coaxial bodies of revolution. Both are first translated
/// along the axis so that the inner profile peaks at `x = 0`.
pub fn check_pair_revolution(
    outer: &RevolutionProfile,
    inner: &RevolutionProfile,
    cfg: &CheckConfig,
) -> Result<CheckReport, CheckError> {
    cfg.validate()?;
    let (outer, inner, _) = RevolutionProfile::normalize_pair(outer, inner);
    let alphas = frame_grid(&inner, cfg.num_frames);
    check_pair_revolution_on(&outer, &inner, cfg, &alphas)
}

/// As [`check_pair_revolution`] on an explicit list of frame angles, without
/// renormalizing the pair.
pub fn check_pair_revolution_on(
    outer: &RevolutionProfile,
    inner: &RevolutionProfile,
    cfg: &CheckConfig,
    alphas: &[f64],
) -> Result<CheckReport, CheckError> {
    cfg.validate()?;
    let m = cfg.num_section_dirs;
    let per_frame: Vec<Result<(TangentFrame, Vec<f64>), CheckError>> = alphas
        .par_iter()
        .enumerate()
        .map(|(k, &alpha)| {
            let frame = tangent_frame(inner, alpha.tan())?;
            let p = frame.tangency_point();
            if outer.indicator(p) >= 0.0 {
                return Err(CheckError::InnerNotContained {
                    frame: k,
                    point: p.to_vec(),
                });
            }
            // A chord covers both w and −w, so half a turn suffices.
            let values = (0..m)
                .map(|j| {
                    let phi = std::f64::consts::PI * j as f64 / m as f64;
                    let chord = chord_endpoints(outer, p, frame.in_plane_direction(phi))?;
                    Ok(chord_power_value(&chord, cfg.power))
                })
                .collect::<Result<Vec<_>, CheckError>>()?;
            Ok((frame, values))
        })
        .collect();

    let mut frames = Vec::with_capacity(alphas.len());
    let mut samples = Vec::with_capacity(alphas.len() * m);
    for (k, r) in per_frame.into_iter().enumerate() {
        let (frame, values) = r?;
        for v in &values {
            samples.push(FrameSample {
                frame_index: k,
                alpha: alphas[k],
                a_s: frame.tangency_x,
                value: *v,
                deviation: 0.0,
            });
        }
        frames.push((frame, values));
    }
    Ok(aggregate(frames, samples, cfg.tolerance))
}

/// Checks a planar pair, sampling supporting lines of the inner body at
/// `num_frames` evenly spaced boundary parameters.
pub fn check_pair_planar(outer: &PlanarBody, inner: &PlanarBody, cfg: &CheckConfig) -> Result<CheckReport, CheckError> {
    cfg.validate()?;
    let n = cfg.num_frames;
    let thetas: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();
    let per_frame: Vec<Result<(TangentFrame, f64, f64), CheckError>> = thetas
        .par_iter()
        .enumerate()
        .map(|(k, &theta)| {
            let p = inner.boundary_point(theta);
            let t = inner.tangent(theta);
            if outer.indicator(p) >= 0.0 {
                return Err(CheckError::InnerNotContained {
                    frame: k,
                    point: p.to_vec(),
                });
            }
            let chord = chord_endpoints(outer, p, Direction::new(t)?)?;
            let slope = t[1] / t[0];
            let frame = TangentFrame {
                slope,
                tangency_x: p[0],
                tangency_height: p[1],
                intercept: p[1] - slope * p[0],
            };
            Ok((frame, t[1].atan2(t[0]), chord_power_value(&chord, cfg.power)))
        })
        .collect();

    let mut frames = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(n);
    for (k, r) in per_frame.into_iter().enumerate() {
        let (frame, alpha, value) = r?;
        samples.push(FrameSample {
            frame_index: k,
            alpha,
            a_s: thetas[k],
            value,
            deviation: 0.0,
        });
        frames.push((frame, vec![value]));
    }
    Ok(aggregate(frames, samples, cfg.tolerance))
}

fn aggregate(frames: Vec<(TangentFrame, Vec<f64>)>, mut samples: Vec<FrameSample>, tolerance: f64) -> CheckReport {
    let all: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let c = median(&all);
    let mut max_dev = 0.0f64;
    let mut worst = 0;
    for s in samples.iter_mut() {
        s.deviation = (s.value - c).abs();
        // NaN must not hide behind a comparison.
        if !(s.deviation <= max_dev) {
            max_dev = s.deviation;
            worst = s.frame_index;
        }
    }
    let per_frame_values = frames.iter().map(|(_, v)| median(v)).collect();
    let max_frame_spread = frames
        .iter()
        .map(|(_, v)| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max);
    CheckReport {
        constant_estimate: c,
        max_deviation: max_dev,
        worst_frame: frames[worst].0,
        per_frame_values,
        max_frame_spread,
        samples,
        tolerance,
    }
}
