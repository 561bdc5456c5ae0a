//! Tangent-chord billiard: from a point `β` of the outer boundary draw the
//! tangent line to the inner body, touch it at `κ`, and continue to the next
//! boundary point. For a disc core this is a rotation of the circle.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::equichordal::power_value;
use crate::geometry::{chord_endpoints, cross2, dist, dot, sub, Boundary, Direction, GeometryError, PlanarBody};
use crate::numeric::{bisect, wrap_angle};

/// Samples of the inner boundary used to bracket tangency roots.
const TANGENCY_SAMPLES: usize = 720;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BilliardError {
    #[error("bad billiard state: need 0 < r < c, got r = {r}, c = {c}")]
    BadState { r: f64, c: f64 },
    #[error("start point {0:?} lies inside the inner body")]
    InsideInner([f64; 2]),
    #[error("tangency failure: {0}")]
    TangencyFailure(String),
    #[error("inner body is not a disc about its basepoint (radius spread {0})")]
    InnerNotDisc(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// State of the disc-core map: `theta` is the polar angle of the current
/// tangency point on the unit circle, `r` the length of `[β, κ]` and
/// `chord_total` the common chord length `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardState {
    theta: f64,
    r: f64,
    chord_total: f64,
    /// `c − r`, kept so that a step swaps the two segments exactly.
    complement: f64,
}

impl BilliardState {
    pub fn new(theta: f64, r: f64, chord_total: f64) -> Result<Self, BilliardError> {
        if !(r > 0.0 && r < chord_total && chord_total.is_finite() && theta.is_finite()) {
            return Err(BilliardError::BadState { r, c: chord_total });
        }
        Ok(Self {
            theta,
            r,
            chord_total,
            complement: chord_total - r,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn chord_total(&self) -> f64 {
        self.chord_total
    }
}

/// `ν(r) = arctan(c − r) + arctan r`, the angle advanced by two steps.
pub fn rotation_number(r: f64, c: f64) -> Result<f64, BilliardError> {
    BilliardState::new(0.0, r, c)?;
    Ok((c - r).atan() + r.atan())
}

/// One step of the disc-core map `(θ, r) ↦ (θ + 2 arctan(c − r), c − r)`.
pub fn disc_step(state: BilliardState) -> Result<BilliardState, BilliardError> {
    let s = state;
    if !(s.r > 0.0 && s.complement > 0.0 && s.chord_total.is_finite() && s.theta.is_finite()) {
        return Err(BilliardError::BadState {
            r: s.r,
            c: s.chord_total,
        });
    }
    Ok(BilliardState {
        theta: s.theta + 2.0 * s.complement.atan(),
        r: s.complement,
        chord_total: s.chord_total,
        complement: s.r,
    })
}

/// Boundary parameters of the inner body at which the line from `beta` is
/// tangent.
fn tangency_params(inner: &PlanarBody, beta: [f64; 2]) -> Vec<f64> {
    let f = |phi: f64| cross2(sub(inner.boundary_point(phi), beta), inner.tangent(phi));
    let n = TANGENCY_SAMPLES;
    let mut roots = Vec::new();
    let mut a = 0.0;
    let mut fa = f(a);
    for k in 1..=n {
        let b = TAU * k as f64 / n as f64;
        let fb = f(b);
        if (fa < 0.0) != (fb < 0.0) {
            roots.extend(bisect(f, a, b, 0.0));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Advances the billiard by one chord. Returns `(β_next, κ)` where `κ` is the
/// tangency point of the chord `[β, β_next]`.
///
/// Without a previous tangency the counterclockwise tangent is taken;
/// otherwise the tangent whose touching point differs from `prev_tangency`.
pub fn general_step(
    outer: &PlanarBody,
    inner: &PlanarBody,
    beta: [f64; 2],
    prev_tangency: Option<[f64; 2]>,
) -> Result<([f64; 2], [f64; 2]), BilliardError> {
    if inner.contains(beta) {
        return Err(BilliardError::InsideInner(beta));
    }
    let roots = tangency_params(inner, beta);
    if roots.len() < 2 {
        return Err(BilliardError::TangencyFailure(format!(
            "found {} tangent lines from {beta:?}, expected 2",
            roots.len()
        )));
    }
    let phi = match prev_tangency {
        Some(prev) => roots
            .iter()
            .copied()
            .max_by(|a, b| dist(inner.boundary_point(*a), prev).total_cmp(&dist(inner.boundary_point(*b), prev)))
            .expect("two roots"),
        None => roots
            .iter()
            .copied()
            .find(|&p| dot(sub(inner.boundary_point(p), beta), inner.tangent(p)) > 0.0)
            .ok_or_else(|| BilliardError::TangencyFailure("no counterclockwise tangent".into()))?,
    };
    let kappa = inner.boundary_point(phi);
    let chord = chord_endpoints(outer, kappa, Direction::new(sub(kappa, beta))?)?;
    Ok((chord.zeta_plus, kappa))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    /// Boundary points `β_0, β_1, …`.
    pub betas: Vec<[f64; 2]>,
    /// Tangency points; `kappas[j]` lies on `[β_j, β_{j+1}]`.
    pub kappas: Vec<[f64; 2]>,
    /// `|β_{j+1} − β_j|`.
    pub chord_lengths: Vec<f64>,
    pub closed: bool,
    pub period: Option<usize>,
    /// Mean advance of the tangency angle per chord.
    pub rotation_estimate: f64,
}

impl OrbitRecord {
    /// Largest gap between consecutive polar angles (about `center`) of the
    /// boundary points.
    pub fn max_angular_gap(&self, center: [f64; 2]) -> f64 {
        max_angular_gap(&self.betas, center)
    }
}

pub fn max_angular_gap(points: &[[f64; 2]], center: [f64; 2]) -> f64 {
    if points.is_empty() {
        return TAU;
    }
    let mut a: Vec<f64> = points
        .iter()
        .map(|p| wrap_angle((p[1] - center[1]).atan2(p[0] - center[0])))
        .collect();
    a.sort_by(f64::total_cmp);
    let wrap = a[0] + TAU - a[a.len() - 1];
    a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Iterates [`general_step`] until `β_j` and `κ_j` return to `β_0`, `κ_0`
/// within `closure_tol`, or `max_steps` chords have been drawn.
pub fn orbit(
    outer: &PlanarBody,
    inner: &PlanarBody,
    beta0: [f64; 2],
    max_steps: usize,
    closure_tol: f64,
) -> Result<OrbitRecord, BilliardError> {
    let center = inner.basepoint();
    let angle = |p: [f64; 2]| (p[1] - center[1]).atan2(p[0] - center[0]);
    let mut betas = vec![beta0];
    let mut kappas: Vec<[f64; 2]> = Vec::new();
    let mut chord_lengths = Vec::new();
    let mut advance = 0.0;
    let mut period = None;
    let mut beta = beta0;
    let mut prev = None;
    for j in 0..max_steps {
        let (next, kappa) = general_step(outer, inner, beta, prev)?;
        if j > 0 && dist(beta, beta0) < closure_tol && dist(kappa, kappas[0]) < closure_tol {
            period = Some(j);
            break;
        }
        if let Some(k) = kappas.last() {
            advance += (angle(kappa) - angle(*k)).rem_euclid(TAU);
        }
        chord_lengths.push(dist(beta, next));
        kappas.push(kappa);
        betas.push(next);
        prev = Some(kappa);
        beta = next;
    }
    let rotation_estimate = if kappas.len() > 1 {
        advance / (kappas.len() - 1) as f64
    } else {
        0.0
    };
    Ok(OrbitRecord {
        betas,
        kappas,
        chord_lengths,
        closed: period.is_some(),
        period,
        rotation_estimate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerChainReport {
    /// `|β_j − κ_j|^p + |κ_j − β_{j+1}|^p` (product when `p = 0`).
    pub power_sums: Vec<f64>,
    pub chord_lengths: Vec<f64>,
    pub power_spread: f64,
    pub chord_spread: f64,
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Runs `steps` chords from `beta0` around a disc core and compares the
/// spread of the per-chord power sums with the spread of the chord lengths.
pub fn power_chain_check(
    outer: &PlanarBody,
    inner: &PlanarBody,
    beta0: [f64; 2],
    power: f64,
    steps: usize,
) -> Result<PowerChainReport, BilliardError> {
    let r0 = inner.rho(0.0);
    let disc_spread = (0..64)
        .map(|k| (inner.rho(TAU * k as f64 / 64.0) - r0).abs())
        .fold(0.0, f64::max);
    if disc_spread > 1e-12 * r0 {
        return Err(BilliardError::InnerNotDisc(disc_spread));
    }
    let orb = orbit(outer, inner, beta0, steps, 0.0)?;
    Ok(power_chain(&orb, power))
}

/// Power sums along an already computed orbit.
pub fn power_chain(orb: &OrbitRecord, power: f64) -> PowerChainReport {
    let power_sums: Vec<f64> = orb
        .kappas
        .iter()
        .enumerate()
        .map(|(j, k)| power_value(dist(orb.betas[j], *k), dist(*k, orb.betas[j + 1]), power))
        .collect();
    PowerChainReport {
        power_spread: spread(&power_sums),
        chord_spread: spread(&orb.chord_lengths),
        power_sums,
        chord_lengths: orb.chord_lengths.clone(),
    }
}

/// Smallest-denominator fraction `p/q` with `q ≤ max_den` and `|x − p/q| < tol`.
pub fn near_rational(x: f64, max_den: u32, tol: f64) -> Option<(i64, u32)> {
    (1..=max_den).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < tol).then_some((p as i64, q))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn circles(r_out: f64, r_in: f64) -> (PlanarBody, PlanarBody) {
        (
            PlanarBody::disc([0.0, 0.0], r_out).unwrap(),
            PlanarBody::disc([0.0, 0.0], r_in).unwrap(),
        )
    }

    #[test]
    fn rotation_numbers() {
        assert!((rotation_number(1.0, 2.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let r3 = 3f64.sqrt();
        assert!((rotation_number(r3, 2.0 * r3).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((rotation_number(0.5, 2.0).unwrap() - 1.446441332248135).abs() < 1e-14);
        assert!(rotation_number(2.0, 2.0).is_err());
        assert!(rotation_number(0.0, 2.0).is_err());
    }

    #[test]
    fn disc_steps() {
        let s = disc_step(BilliardState::new(0.0, 1.0, 2.0).unwrap()).unwrap();
        assert!((s.theta - FRAC_PI_2).abs() < 1e-15 && s.r == 1.0);
        let s0 = BilliardState::new(0.3, 0.7, 2.5).unwrap();
        let s2 = disc_step(disc_step(s0).unwrap()).unwrap();
        assert_eq!(s2.r, s0.r);
        assert!((s2.theta - s0.theta - 2.0 * rotation_number(0.7, 2.5).unwrap()).abs() < 1e-15);
        assert!(BilliardState::new(0.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn equilateral_orbit() {
        let (k, b) = circles(2.0, 1.0);
        let o = orbit(&k, &b, [2.0, 0.0], 20, 1e-8).unwrap();
        assert_eq!(o.period, Some(3));
        for l in &o.chord_lengths {
            assert!((l - 2.0 * 3f64.sqrt()).abs() < 1e-9);
        }
        assert!((o.rotation_estimate - 2.0 * PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn first_step_is_counterclockwise() {
        let (k, b) = circles(2.0, 1.0);
        let (next, kappa) = general_step(&k, &b, [2.0, 0.0], None).unwrap();
        assert!(kappa[1] > 0.0 && next[1] > 0.0);
    }

    #[test]
    fn start_inside_core_is_rejected() {
        let (k, b) = circles(2.0, 1.0);
        assert!(matches!(
            general_step(&k, &b, [0.5, 0.0], None),
            Err(BilliardError::InsideInner(_))
        ));
    }

    #[test]
    fn product_chain_on_circles() {
        let (k, b) = circles(2.0, 1.0);
        let r = power_chain_check(&k, &b, [0.0, 2.0], 0.0, 30).unwrap();
        assert!(r.power_spread < 1e-9 && r.chord_spread < 1e-9);
        assert!((r.power_sums[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn chain_requires_disc_core() {
        let k = PlanarBody::disc([0.0, 0.0], 3.0).unwrap();
        let e = PlanarBody::ellipse([0.0, 0.0], 1.2, 1.0).unwrap();
        assert!(matches!(
            power_chain_check(&k, &e, [3.0, 0.0], 4.0, 5),
            Err(BilliardError::InnerNotDisc(_))
        ));
    }

    #[test]
    fn gaps_and_rationals() {
        let pts = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];
        assert!((max_angular_gap(&pts, [0.0, 0.0]) - PI).abs() < 1e-15);
        assert_eq!(near_rational(0.5, 10, 1e-9), Some((1, 2)));
        assert_eq!(near_rational(2.0 / 3.0, 10, 1e-9), Some((2, 3)));
        assert_eq!(near_rational(1.0 / PI, 20, 1e-6), None);
    }
}
