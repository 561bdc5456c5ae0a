//! The χ-function of a body of revolution and the identities it must satisfy
//! when the body is (d+1)-equichordal with respect to a nested inner body.
//!
//! For an outer profile `f` and half-chord `σ`, the horizontal section
//! through the inner crest has boundary `φ² = f² − f(0)² + σ²`, written as
//! `φ²(x) = σ² − x² + χ(x)`. A ball gives `χ ≡ 0`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{GeometryError, RevolutionProfile, SectionProfile};
use crate::numeric::bisect;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RevolutionError {
    #[error("bad sigma: need 0 < sigma < f(0) = {f0}, got {sigma}")]
    BadSigma { sigma: f64, f0: f64 },
    #[error("sigma too large: the profile never exceeds sigma = {sigma} (max radius {max})")]
    SigmaTooLarge { sigma: f64, max: f64 },
    #[error("dimension must be at least 3, got {0}")]
    BadDimension(usize),
    #[error("out of range at x = {x}: {reason}")]
    OutOfRange { x: f64, reason: String },
    #[error("support too small: [-2h, 2h] with h = {h} is not inside [{lo}, {hi}]")]
    SupportTooSmall { h: f64, lo: f64, hi: f64 },
    #[error("negative radicand {value} at a = {a}")]
    RadicandNegative { a: f64, value: f64 },
    #[error("no outer profile attached to this chi function")]
    NoProfile,
    #[error("arc mismatch at x = {x}: boundary deviates from the circle by {deviation}")]
    ArcMismatch { x: f64, deviation: f64 },
    #[error("start interval is not circular: f^2 deviates from f(0)^2 - x^2 by {deviation} at x = {x}")]
    StartNotCircular { x: f64, deviation: f64 },
    #[error("bad interval [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("moving chord stalled at step {step} on [{lo}, {hi}]")]
    Stalled { step: usize, lo: f64, hi: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

type ChiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `χ` together with its support `[−τ₁, τ₂]`, the half-chord `σ` and the
/// dimension `d`.
#[derive(Clone)]
pub struct ChiFunction {
    chi: ChiFn,
    support: (f64, f64),
    sigma: f64,
    dim: usize,
    outer: Option<RevolutionProfile>,
}

impl fmt::Debug for ChiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChiFunction")
            .field("support", &self.support)
            .field("sigma", &self.sigma)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl ChiFunction {
    /// A χ given directly, e.g. a Taylor model. `χ(0)` must vanish.
    pub fn from_fn<F>(chi: F, support: (f64, f64), sigma: f64, dim: usize) -> Result<Self, RevolutionError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if dim < 3 {
            return Err(RevolutionError::BadDimension(dim));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(RevolutionError::BadSigma { sigma, f0: f64::NAN });
        }
        let (lo, hi) = support;
        if !(lo < 0.0 && hi > 0.0 && lo.is_finite() && hi.is_finite()) {
            return Err(RevolutionError::BadInterval(lo, hi));
        }
        let c0 = chi(0.0);
        if c0.abs() > 1e-12 * sigma * sigma {
            return Err(RevolutionError::OutOfRange {
                x: 0.0,
                reason: format!("chi(0) = {c0} must vanish"),
            });
        }
        Ok(Self {
            chi: Arc::new(chi),
            support,
            sigma,
            dim,
            outer: None,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.chi)(x)
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outer(&self) -> Option<&RevolutionProfile> {
        self.outer.as_ref()
    }

    fn exponent(&self) -> f64 {
        (self.dim as f64 + 1.0) / 2.0
    }

    /// Slope `s = g′(a)` of the inner profile `g = √(f² − σ²)` at `a` and the
    /// offset `A = s·√(f(0)² − a² + χ(a) − σ²)`.
    pub fn slope_and_offset(&self, a: f64) -> Result<(f64, f64), RevolutionError> {
        let f = self.outer.as_ref().ok_or(RevolutionError::NoProfile)?;
        let f0 = f.radius(0.0);
        let radicand = f0 * f0 - a * a + self.eval(a) - self.sigma * self.sigma;
        if !(radicand > 0.0) {
            return Err(RevolutionError::RadicandNegative { a, value: radicand });
        }
        let g = radicand.sqrt();
        let s = f.radius(a) * f.derivative(a) / g;
        Ok((s, s * g))
    }
}

/// `χ(x) = f²(x) − f²(0) + x²` on the interval where `f² − f(0)² + σ² ≥ 0`.
pub fn chi_from_profiles(outer: &RevolutionProfile, sigma: f64, dim: usize) -> Result<ChiFunction, RevolutionError> {
    let f0 = outer.radius(0.0);
    if !(sigma > 0.0 && sigma < f0) {
        return Err(RevolutionError::BadSigma { sigma, f0 });
    }
    if dim < 3 {
        return Err(RevolutionError::BadDimension(dim));
    }
    let phi2 = |x: f64| {
        let f = outer.radius(x);
        f * f - f0 * f0 + sigma * sigma
    };
    let tau2 = bisect(phi2, 0.0, outer.x_max(), 0.0).unwrap_or(outer.x_max());
    let tau1 = bisect(phi2, outer.x_min(), 0.0, 0.0).unwrap_or(outer.x_min());
    let f = outer.clone();
    Ok(ChiFunction {
        chi: Arc::new(move |x| {
            let r = f.radius(x);
            r * r - f0 * f0 + x * x
        }),
        support: (tau1, tau2),
        sigma,
        dim,
        outer: Some(outer.clone()),
    })
}

/// Inner profile `g = √(f² − σ²)` on `[−r₁, r₂]`, where `f ≥ σ`.
pub fn g_from_f(outer: &RevolutionProfile, sigma: f64) -> Result<RevolutionProfile, RevolutionError> {
    let top = outer.max_radius();
    if !(sigma > 0.0) || top <= sigma {
        return Err(RevolutionError::SigmaTooLarge { sigma, max: top });
    }
    let c = outer.argmax();
    let h = |x: f64| outer.radius(x) - sigma;
    let lo = bisect(h, outer.x_min(), c, 0.0).ok_or(RevolutionError::SigmaTooLarge { sigma, max: top })?;
    let hi = bisect(h, c, outer.x_max(), 0.0).ok_or(RevolutionError::SigmaTooLarge { sigma, max: top })?;
    let f1 = outer.clone();
    let f2 = outer.clone();
    Ok(RevolutionProfile::from_squared(
        lo,
        hi,
        move |x| {
            let r = f1.radius(x);
            r * r - sigma * sigma
        },
        move |x| 2.0 * f2.radius(x) * f2.derivative(x),
        format!("inner of {} at sigma={sigma}", outer.label()),
    )?)
}

/// `|y|` for the partner `y < 0` of `x > 0` on the same chord through the
/// origin of an equichordal section with deviation `χ`.
pub fn partner_point(x: f64, chi: &ChiFunction) -> Result<f64, RevolutionError> {
    let (_, hi) = chi.support;
    if !(0.0..=hi).contains(&x) {
        return Err(RevolutionError::OutOfRange {
            x,
            reason: format!("x must lie in [0, {hi}]"),
        });
    }
    let s2 = chi.sigma * chi.sigma;
    let q = chi.eval(x) / s2;
    if !(q > -1.0) {
        return Err(RevolutionError::OutOfRange {
            x,
            reason: format!("q = {q} must exceed -1"),
        });
    }
    let p = (1.0 + q).powf(chi.exponent());
    if p > 2.0 {
        return Err(RevolutionError::OutOfRange {
            x,
            reason: format!("(1+q)^((d+1)/2) = {p} exceeds 2; no partner exists"),
        });
    }
    Ok(x * (2.0 - p).powf(1.0 / (chi.dim as f64 + 1.0)) / (1.0 + q).sqrt())
}

/// `(σ² + χ(x))^((d+1)/2) + (σ² + χ(y))^((d+1)/2) − 2σ^(d+1)` with `y` the
/// partner of `x`.
pub fn equichordal_residual_1d(chi: &ChiFunction, x: f64) -> Result<f64, RevolutionError> {
    let y = -partner_point(x, chi)?;
    if y < chi.support.0 {
        return Err(RevolutionError::OutOfRange {
            x,
            reason: format!("partner {y} leaves the support"),
        });
    }
    let m = chi.exponent();
    let s2 = chi.sigma * chi.sigma;
    Ok((s2 + chi.eval(x)).powf(m) + (s2 + chi.eval(y)).powf(m) - 2.0 * chi.sigma.powf(2.0 * m))
}

fn check_step(chi: &ChiFunction, at: f64, h: f64) -> Result<(), RevolutionError> {
    let (lo, hi) = chi.support;
    if !(h > 0.0 && at - 2.0 * h >= lo && at + 2.0 * h <= hi) {
        return Err(RevolutionError::SupportTooSmall {
            h,
            lo: lo - at,
            hi: hi - at,
        });
    }
    Ok(())
}

/// Central differences `(χ′, χ″)` at `x` with step `h`.
pub fn central_derivatives(chi: &ChiFunction, x: f64, h: f64) -> (f64, f64) {
    let (m, c, p) = (chi.eval(x - h), chi.eval(x), chi.eval(x + h));
    ((p - m) / (2.0 * h), (p - 2.0 * c + m) / (h * h))
}

/// Central differences with one level of Richardson extrapolation (steps
/// `h` and `2h`), accurate to `O(h⁴)`.
pub fn richardson_derivatives(chi: &ChiFunction, x: f64, h: f64) -> (f64, f64) {
    let (d1, d2) = central_derivatives(chi, x, h);
    let (e1, e2) = central_derivatives(chi, x, 2.0 * h);
    ((4.0 * d1 - e1) / 3.0, (4.0 * d2 - e2) / 3.0)
}

fn comp0(chi: &ChiFunction, d1: f64, d2: f64) -> f64 {
    2.0 * chi.sigma * chi.sigma * d2 + (chi.dim as f64 + 1.0) * d1 * d1
}

/// `2σ²χ″(0) + (d+1)χ′(0)²` by plain central differences at step `h`
/// (error `O(h²)`).
pub fn verify_comp0(chi: &ChiFunction, h: f64) -> Result<f64, RevolutionError> {
    check_step(chi, 0.0, h)?;
    let (d1, d2) = central_derivatives(chi, 0.0, h);
    Ok(comp0(chi, d1, d2))
}

/// As [`verify_comp0`] with Richardson-extrapolated derivatives.
pub fn verify_comp0_richardson(chi: &ChiFunction, h: f64) -> Result<f64, RevolutionError> {
    check_step(chi, 0.0, h)?;
    let (d1, d2) = richardson_derivatives(chi, 0.0, h);
    Ok(comp0(chi, d1, d2))
}

/// Default finite-difference step, `10⁻³` of the shorter support half.
pub fn default_step(chi: &ChiFunction) -> f64 {
    1e-3 * (-chi.support.0).min(chi.support.1)
}

/// `χ_a(x) = −2(a + A)x + χ(a + x) − χ(a)`, the deviation function of the
/// tilted section tangent to the inner body at `a`.
pub fn shifted_chi(chi: &ChiFunction, a: f64, offset: f64) -> Result<ChiFunction, RevolutionError> {
    let (lo, hi) = chi.support;
    if !(a > lo && a < hi) {
        return Err(RevolutionError::OutOfRange {
            x: a,
            reason: format!("shift must lie inside ({lo}, {hi})"),
        });
    }
    let inner = chi.chi.clone();
    let ca = inner(a);
    Ok(ChiFunction {
        chi: Arc::new(move |x| -2.0 * (a + offset) * x + inner(a + x) - ca),
        support: (lo - a, hi - a),
        sigma: chi.sigma,
        dim: chi.dim,
        outer: None,
    })
}

/// `2σ²χ″(a) + (d+1)(χ′(a) − 2(a + A))²` with `A` taken from the attached
/// outer profile, evaluated as the comp0 residual of `χ_a`.
pub fn shifted_comp0(chi: &ChiFunction, a: f64, h: f64) -> Result<f64, RevolutionError> {
    let (_, offset) = chi.slope_and_offset(a)?;
    let shifted = shifted_chi(chi, a, offset)?;
    verify_comp0_richardson(&shifted, h)
}

/// Residual of the equichordal relation computed directly in a tilted
/// section: the boundary point above axial parameter `x > 0` and its partner
/// across the tangency point.
pub fn tilted_section_residual(section: &SectionProfile, sigma: f64, dim: usize, x: f64) -> f64 {
    let stretch = section.frame().slope.hypot(1.0);
    let u = x * stretch;
    let psi = section.psi(u);
    let phi = psi.atan2(u);
    let m = dim as f64 + 1.0;
    let rx = section.radius_sq_at(x).sqrt();
    let ry = section.radial(std::f64::consts::PI - phi);
    rx.powf(m) + ry.powf(m) - 2.0 * sigma.powf(m)
}

#[derive(Debug, Clone, PartialEq)]
pub enum HeartVerdict {
    /// Endpoint relation holds and `χ` vanishes on the interval.
    Consistent,
    /// Hypotheses fail (χ positive somewhere, or the endpoint relation is off).
    NotApplicable(String),
    /// Hypotheses hold but `χ` does not vanish: no body produces such data.
    Inconsistent { x: f64, chi: f64 },
}

/// If `χ ≤ 0` on `[−λ₁, λ₂]` and the endpoint relation
/// `(σ² + χ(−λ₁))^((d+1)/2) + (σ² + χ(λ₂))^((d+1)/2) = 2σ^(d+1)` holds,
/// then `χ` must vanish on the whole interval.
pub fn heart_validator(chi: &ChiFunction, lambda1: f64, lambda2: f64, tol: f64) -> HeartVerdict {
    let n = 1024;
    let (lo, hi) = (-lambda1, lambda2);
    let samples: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            (x, chi.eval(x))
        })
        .collect();
    if let Some((x, v)) = samples.iter().find(|(_, v)| *v > tol) {
        return HeartVerdict::NotApplicable(format!("chi({x}) = {v} is positive"));
    }
    let m = chi.exponent();
    let s2 = chi.sigma * chi.sigma;
    let lhs = (s2 + chi.eval(lo)).powf(m) + (s2 + chi.eval(hi)).powf(m);
    let rhs = 2.0 * chi.sigma.powf(2.0 * m);
    if (lhs - rhs).abs() > tol * rhs {
        return HeartVerdict::NotApplicable(format!("endpoint relation off by {}", lhs - rhs));
    }
    let (x, v) = samples
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    if v < -tol {
        HeartVerdict::Inconsistent { x, chi: v }
    } else {
        HeartVerdict::Consistent
    }
}

/// How the χ-support `[−τ₁, τ₂]` and the inner support `[−r₁, r₂]` nest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportNesting {
    /// `[−r₁, r₂] ⊆ [−τ₁, τ₂]`; `symmetric` records whether `r₁ = r₂`.
    InnerWithinChi { symmetric: bool },
    /// `[−τ₁, τ₂] ⊆ [−r₁, r₂]`.
    ChiWithinInner,
    /// Neither contains the other; impossible for a convex pair.
    Crossing,
}

pub fn support_nesting(chi: &ChiFunction, inner: &RevolutionProfile, tol: f64) -> SupportNesting {
    let (t1, t2) = chi.support;
    let (r1, r2) = (inner.x_min(), inner.x_max());
    if r1 >= t1 - tol && r2 <= t2 + tol {
        SupportNesting::InnerWithinChi {
            symmetric: (r1 + r2).abs() <= tol,
        }
    } else if t1 >= r1 - tol && t2 <= r2 + tol {
        SupportNesting::ChiWithinInner
    } else {
        SupportNesting::Crossing
    }
}

/// Tangency parameters swept per pass of the moving-chord procedure.
pub const SWEEP_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalChain {
    /// `[−u_j, v_j]`, starting with the input interval.
    pub intervals: Vec<(f64, f64)>,
    /// Largest endpoint deviation from the circle found in each sweep (0 for
    /// the start interval).
    pub max_deviations: Vec<f64>,
    pub f0: f64,
    pub sigma: f64,
}

impl IntervalChain {
    pub fn terminal(&self) -> (f64, f64) {
        *self.intervals.last().expect("chain is never empty")
    }

    /// `√(f(0)² − σ²)`, the half-width the chain must reach.
    pub fn target(&self) -> f64 {
        (self.f0 * self.f0 - self.sigma * self.sigma).sqrt()
    }

    /// Inner profile implied on the covered interval, `√(f(0)² − x² − σ²)`.
    pub fn reconstructed_g(&self, x: f64) -> f64 {
        (self.f0 * self.f0 - x * x - self.sigma * self.sigma).max(0.0).sqrt()
    }
}

/// Propagates the circular identity `f²(x) = f(0)² − x²` outwards from
/// `start` using chords of half-length `σ` centred at their tangency with
/// `g = √(f² − σ²)`. Each swept endpoint must land on `∂K`; one that misses
/// by more than `tol` is reported as [`RevolutionError::ArcMismatch`].
pub fn moving_chord_extend(
    outer: &RevolutionProfile,
    sigma: f64,
    start: (f64, f64),
    tol: f64,
) -> Result<IntervalChain, RevolutionError> {
    let f0 = outer.radius(0.0);
    if !(sigma > 0.0 && sigma < f0) {
        return Err(RevolutionError::BadSigma { sigma, f0 });
    }
    let target = (f0 * f0 - sigma * sigma).sqrt();
    let (mut lo, mut hi) = start;
    if !(lo < hi && lo >= -target && hi <= target) {
        return Err(RevolutionError::BadInterval(lo, hi));
    }
    let circle_dev = |x: f64| {
        let f = outer.radius(x);
        (f * f - (f0 * f0 - x * x)).abs()
    };
    for k in 0..=256 {
        let x = lo + (hi - lo) * k as f64 / 256.0;
        let d = circle_dev(x);
        if d > 1e-8 {
            return Err(RevolutionError::StartNotCircular { x, deviation: d });
        }
    }

    let mut chain = IntervalChain {
        intervals: vec![(lo, hi)],
        max_deviations: vec![0.0],
        f0,
        sigma,
    };
    let covered = |lo: f64, hi: f64| lo <= -target * (1.0 - 1e-12) && hi >= target * (1.0 - 1e-12);
    let mut step = 0;
    while !covered(lo, hi) {
        step += 1;
        let n = SWEEP_SAMPLES;
        let cell = (hi - lo) / (n - 1) as f64;
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_dev = 0.0f64;
        let mut witness: Option<(f64, f64)> = None;
        for k in 0..n {
            let b = lo + cell * k as f64;
            let f = outer.radius(b);
            let g = (f * f - sigma * sigma).max(0.0).sqrt();
            let slope = f * outer.derivative(b) / g;
            let norm = slope.hypot(1.0);
            for sign in [-1.0, 1.0] {
                let zx = b + sign * sigma / norm;
                let zz = g + sign * sigma * slope / norm;
                let dev = (outer.radius(zx) - zz).abs();
                max_dev = max_dev.max(dev);
                if dev > tol {
                    // Keep the failing endpoint nearest the verified interval.
                    let gap = if zx < lo { lo - zx } else { (zx - hi).max(0.0) };
                    if witness.is_none_or(|(wx, _)| gap < if wx < lo { lo - wx } else { (wx - hi).max(0.0) }) {
                        witness = Some((zx, dev));
                    }
                }
                min_x = min_x.min(zx);
                max_x = max_x.max(zx);
            }
        }
        if let Some((x, deviation)) = witness {
            return Err(RevolutionError::ArcMismatch { x, deviation });
        }
        let new_lo = (min_x + cell).max(-target).min(lo);
        let new_hi = (max_x - cell).min(target).max(hi);
        if !(new_lo < lo || new_hi > hi) {
            return Err(RevolutionError::Stalled { step, lo, hi });
        }
        lo = if new_lo <= -target * (1.0 - 1e-12) {
            -target
        } else {
            new_lo
        };
        hi = if new_hi >= target * (1.0 - 1e-12) {
            target
        } else {
            new_hi
        };
        chain.intervals.push((lo, hi));
        chain.max_deviations.push(max_dev);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{section_profile, tangent_frame};

    fn ball(r: f64) -> RevolutionProfile {
        RevolutionProfile::ball(r).unwrap()
    }

    fn synthetic(f: impl Fn(f64) -> f64 + Send + Sync + 'static, sigma: f64, dim: usize) -> ChiFunction {
        ChiFunction::from_fn(f, (-0.5, 0.5), sigma, dim).unwrap()
    }

    #[test]
    fn ball_chi_vanishes() {
        let chi = chi_from_profiles(&ball(2.0), 1.2, 3).unwrap();
        let (lo, hi) = chi.support();
        assert!((lo + 1.2).abs() < 1e-12 && (hi - 1.2).abs() < 1e-12);
        for x in [-1.1, -0.3, 0.0, 0.8] {
            assert!(chi.eval(x).abs() < 1e-14);
        }
    }

    #[test]
    fn cubic_perturbation_chi() {
        let f = RevolutionProfile::from_squared(
            -1.9,
            1.9,
            |x| 4.0 - x * x + 0.01 * x.powi(3),
            |x| -2.0 * x + 0.03 * x * x,
            "cubic",
        )
        .unwrap();
        let chi = chi_from_profiles(&f, 1.0, 3).unwrap();
        for x in [-0.7, 0.2, 0.9] {
            assert!((chi.eval(x) - 0.01 * x.powi(3)).abs() < 1e-13);
        }
    }

    #[test]
    fn sigma_bounds() {
        assert!(matches!(
            chi_from_profiles(&ball(2.0), 2.0, 3),
            Err(RevolutionError::BadSigma { .. })
        ));
        assert!(matches!(
            g_from_f(&ball(2.0), 2.0),
            Err(RevolutionError::SigmaTooLarge { .. })
        ));
        assert!(matches!(
            chi_from_profiles(&ball(2.0), 1.0, 2),
            Err(RevolutionError::BadDimension(2))
        ));
    }

    #[test]
    fn inner_of_ball_is_ball() {
        let g = g_from_f(&ball(2.0), 1.0).unwrap();
        assert!((g.x_max() - 3f64.sqrt()).abs() < 1e-12);
        for x in [-1.5, 0.0, 0.4, 1.7] {
            assert!((g.radius(x) - (3.0 - x * x).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_of_quartic_perturbation() {
        let f = RevolutionProfile::perturbed_ball(2.0, 0.05, 4).unwrap();
        let g = g_from_f(&f, 1.0).unwrap();
        let r2 = g.x_max();
        assert!((f.radius(r2) - 1.0).abs() < 1e-12);
        for x in [-1.0f64, 0.3, 1.2] {
            let exact = (3.0 - x * x + 0.05 * x.powi(4)).sqrt();
            assert!((g.radius(x) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_of_ball_is_mirror() {
        let chi = synthetic(|_| 0.0, 1.0, 3);
        assert_eq!(partner_point(0.3, &chi).unwrap(), 0.3);
        assert_eq!(equichordal_residual_1d(&chi, 0.3).unwrap(), 0.0);
        assert_eq!(equichordal_residual_1d(&chi, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn partner_beyond_range() {
        let chi = synthetic(|x| 3.0 * x, 1.0, 3);
        assert!(matches!(
            partner_point(0.4, &chi),
            Err(RevolutionError::OutOfRange { .. })
        ));
        assert!(partner_point(-0.1, &chi).is_err());
    }

    #[test]
    fn linear_chi_residual_matches_direct_evaluation() {
        let sigma = 1.3;
        let chi = synthetic(move |x| 0.1 * sigma * sigma * x, sigma, 3);
        let x: f64 = 0.1;
        let q = 0.1 * x;
        let y = x * (2.0 - (1.0 + q) * (1.0 + q)).powf(0.25) / (1.0 + q).sqrt();
        let s2 = sigma * sigma;
        let direct = (s2 * (1.0 + q)).powi(2) + (s2 * (1.0 - 0.1 * y)).powi(2) - 2.0 * sigma.powi(4);
        let r = equichordal_residual_1d(&chi, x).unwrap();
        assert!((r - direct).abs() < 1e-14);
        assert!(r.abs() > 1e-6);
    }

    #[test]
    fn comp0_cases() {
        let zero = synthetic(|_| 0.0, 1.0, 3);
        assert_eq!(verify_comp0(&zero, 1e-3).unwrap(), 0.0);
        let lin = synthetic(|x| 0.1 * x, 1.0, 3);
        assert!((verify_comp0(&lin, 1e-3).unwrap() - 0.04).abs() < 1e-6);
        let (e1, d) = (0.4, 5.0);
        let e2 = -(d + 1.0) * e1 * e1 / 4.0;
        let tuned = synthetic(move |x| e1 * x + e2 * x * x, 1.0, 5);
        assert!(verify_comp0(&tuned, 1e-2).unwrap().abs() < 1e-10);
        assert!(matches!(
            verify_comp0(&zero, 0.3),
            Err(RevolutionError::SupportTooSmall { .. })
        ));
    }

    #[test]
    fn richardson_is_fourth_order() {
        let chi = synthetic(|x: f64| 0.2 * x.sin() + 0.1 * (1.0 - x.cos()), 1.0, 3);
        let exact = 2.0 * 0.1 + 4.0 * 0.04;
        let e1 = (verify_comp0_richardson(&chi, 0.02).unwrap() - exact).abs();
        let e2 = (verify_comp0_richardson(&chi, 0.01).unwrap() - exact).abs();
        assert!(e1 / e2 > 12.0, "{}", e1 / e2);
    }

    #[test]
    fn shift_identity_cases() {
        let zero = synthetic(|_| 0.0, 1.0, 3);
        let same = shifted_chi(&zero, 0.0, 0.0).unwrap();
        assert_eq!(same.eval(0.2), 0.0);
        let lin = shifted_chi(&zero, 0.1, 0.3).unwrap();
        assert!((lin.eval(0.2) + 2.0 * 0.4 * 0.2).abs() < 1e-15);
        assert_eq!(lin.support(), (-0.6, 0.4));
    }

    #[test]
    fn tilted_radius_matches_shifted_chi() {
        let f = RevolutionProfile::perturbed_ball(2.0, 0.05, 4).unwrap();
        let sigma = 1.0;
        let chi = chi_from_profiles(&f, sigma, 3).unwrap();
        let g = g_from_f(&f, sigma).unwrap();
        for s in [-0.3, 0.0, 0.2] {
            let frame = tangent_frame(&g, s).unwrap();
            let a = frame.tangency_x;
            let (s_chi, offset) = chi.slope_and_offset(a).unwrap();
            assert!((s_chi - s).abs() < 1e-9);
            let sec = section_profile(&f, &frame).unwrap();
            let cha = shifted_chi(&chi, a, offset).unwrap();
            for x in [-0.2, 0.05, 0.15] {
                let lhs = sec.radius_sq_at(x);
                assert!((lhs - sigma * sigma - cha.eval(x)).abs() < 1e-12, "s={s} x={x}");
            }
        }
    }

    #[test]
    fn ball_adif_vanishes() {
        let chi = chi_from_profiles(&ball(2.0), 1.5, 3).unwrap();
        for a in [-0.5, 0.0, 0.7] {
            assert!(shifted_comp0(&chi, a, 1e-3).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn heart_cases() {
        let zero = synthetic(|_| 0.0, 1.0, 3);
        assert_eq!(heart_validator(&zero, 0.4, 0.4, 1e-12), HeartVerdict::Consistent);
        let bowl = synthetic(|x: f64| -0.01 * (1.0 - x.cos()), 1.0, 3);
        assert!(matches!(
            heart_validator(&bowl, 0.4, 0.4, 1e-12),
            HeartVerdict::NotApplicable(_)
        ));
        let dip = synthetic(|x: f64| -1e-3 * (std::f64::consts::PI * x / 0.4).sin().powi(2), 1.0, 3);
        assert!(matches!(
            heart_validator(&dip, 0.4, 0.4, 1e-12),
            HeartVerdict::Inconsistent { chi, .. } if (chi + 1e-3).abs() < 1e-6
        ));
        let bump = synthetic(|x: f64| 0.01 * x * x, 1.0, 3);
        assert!(matches!(
            heart_validator(&bump, 0.4, 0.4, 1e-12),
            HeartVerdict::NotApplicable(_)
        ));
    }

    #[test]
    fn nesting_of_ball_supports() {
        // Small sigma: chi support [−σ, σ] sits inside the inner support.
        let f = ball(2.0);
        let chi = chi_from_profiles(&f, 0.5, 3).unwrap();
        let g = g_from_f(&f, 0.5).unwrap();
        assert_eq!(support_nesting(&chi, &g, 1e-9), SupportNesting::ChiWithinInner);
        let chi = chi_from_profiles(&f, 1.8, 3).unwrap();
        let g = g_from_f(&f, 1.8).unwrap();
        assert_eq!(
            support_nesting(&chi, &g, 1e-9),
            SupportNesting::InnerWithinChi { symmetric: true }
        );
    }

    #[test]
    fn moving_chord_on_ball() {
        let chain = moving_chord_extend(&ball(2.0), 1.0, (-0.3, 0.3), 1e-8).unwrap();
        let (lo, hi) = chain.terminal();
        assert!(lo <= -3f64.sqrt() && hi >= 3f64.sqrt());
        assert!(chain.max_deviations.iter().all(|d| *d < 1e-8));
        for w in chain.intervals.windows(2) {
            assert!(w[1].0 < w[0].0 || w[1].1 > w[0].1);
            assert!(w[1].0 <= w[0].0 && w[1].1 >= w[0].1);
        }
    }

    #[test]
    fn moving_chord_fixed_point() {
        let t = 3f64.sqrt();
        let chain = moving_chord_extend(&ball(2.0), 1.0, (-t, t), 1e-8).unwrap();
        assert_eq!(chain.intervals.len(), 1);
    }

    #[test]
    fn moving_chord_rejects_noncircular_start() {
        let f = RevolutionProfile::perturbed_ball(2.0, 0.05, 4).unwrap();
        assert!(matches!(
            moving_chord_extend(&f, 1.0, (-0.3, 0.3), 1e-8),
            Err(RevolutionError::StartNotCircular { .. })
        ));
    }
}
