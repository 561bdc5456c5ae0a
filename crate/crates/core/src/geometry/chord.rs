use super::{axpy, dist, norm, Boundary, Direction, GeometryError};
use crate::numeric::{bisect, golden_min};

/// Samples per line used to bracket boundary crossings and to detect
/// non-convex (more than two) crossings.
const LINE_SAMPLES: usize = 64;

/// Chord of an outer body through a base point (usually the tangency point
/// of a supporting line of the inner body).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord<const D: usize> {
    pub zeta_plus: [f64; D],
    pub zeta_minus: [f64; D],
    pub tangency: [f64; D],
    pub dist_plus: f64,
    pub dist_minus: f64,
}

impl<const D: usize> Chord<D> {
    pub fn length(&self) -> f64 {
        self.dist_plus + self.dist_minus
    }
}

/// Intersects the line `point + t·direction` with the boundary of `body`.
///
/// `zeta_plus` lies in the `+direction` half, `zeta_minus` in the other;
/// `point` must be strictly inside the chord.
pub fn chord_endpoints<const D: usize, B: Boundary<D> + ?Sized>(
    body: &B,
    point: [f64; D],
    direction: Direction<D>,
) -> Result<Chord<D>, GeometryError> {
    let u = direction.components();
    let (center, radius) = body.bounding_ball();
    let reach = (dist(point, center) + radius) * 1.01 + f64::MIN_POSITIVE;
    let phi = |t: f64| body.indicator(axpy(point, t, u));

    let n = LINE_SAMPLES;
    let ts: Vec<f64> = (0..=n).map(|k| -reach + 2.0 * reach * k as f64 / n as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| phi(t)).collect();

    let crossings = vals.windows(2).filter(|w| (w[0] <= 0.0) != (w[1] <= 0.0)).count();
    if crossings > 2 {
        return Err(GeometryError::ConvexityViolation { crossings });
    }

    // Pick a parameter strictly inside the body on this line.
    let inside_t = if phi(0.0) < 0.0 {
        0.0
    } else {
        let (k, v) = vals
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty sample");
        if v < 0.0 {
            ts[k]
        } else {
            let lo = ts[k.saturating_sub(1)];
            let hi = ts[(k + 1).min(n)];
            let (t, m) = golden_min(phi, lo, hi, 1e-15 * reach);
            let degenerate_tol = 1e-12 * radius.max(1e-300);
            if m < 0.0 && m < -degenerate_tol {
                t
            } else if m <= degenerate_tol {
                return Err(GeometryError::DegenerateChord);
            } else {
                return Err(GeometryError::NoIntersection);
            }
        }
    };

    let t_plus = bisect(phi, inside_t, reach, 0.0).ok_or(GeometryError::NoIntersection)?;
    let t_minus = bisect(phi, -reach, inside_t, 0.0).ok_or(GeometryError::NoIntersection)?;
    if t_plus - t_minus <= 1e-9 * radius {
        return Err(GeometryError::DegenerateChord);
    }
    if !(t_minus < 0.0 && t_plus > 0.0) {
        return Err(GeometryError::NotInterior);
    }
    let zeta_plus = axpy(point, t_plus, u);
    let zeta_minus = axpy(point, t_minus, u);
    Ok(Chord {
        zeta_plus,
        zeta_minus,
        tangency: point,
        dist_plus: t_plus * norm(u),
        dist_minus: -t_minus * norm(u),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{PlanarBody, RevolutionProfile};
    use super::*;

    fn ball2() -> RevolutionProfile {
        RevolutionProfile::ball(2.0).unwrap()
    }

    #[test]
    fn tangent_to_inner_ball_gives_root_three_halves() {
        let c = chord_endpoints(&ball2(), [0.0, 0.0, 1.0], Direction::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!((c.dist_plus - 3f64.sqrt()).abs() < 1e-14);
        assert!((c.dist_minus - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn diameter_has_length_four() {
        for dir in [[1.0, 0.0, 0.0], [0.3, -0.4, 0.5], [0.0, 0.0, 1.0]] {
            let c = chord_endpoints(&ball2(), [0.0; 3], Direction::new(dir).unwrap()).unwrap();
            assert!((c.length() - 4.0).abs() < 1e-13, "{dir:?}");
        }
    }

    #[test]
    fn supporting_line_is_degenerate() {
        let e = chord_endpoints(&ball2(), [0.0, 0.0, 2.0], Direction::new([1.0, 0.0, 0.0]).unwrap());
        assert_eq!(e.unwrap_err(), GeometryError::DegenerateChord);
    }

    #[test]
    fn missing_line() {
        let e = chord_endpoints(&ball2(), [0.0, 0.0, 3.0], Direction::new([1.0, 0.0, 0.0]).unwrap());
        assert_eq!(e.unwrap_err(), GeometryError::NoIntersection);
    }

    #[test]
    fn base_point_outside_chord() {
        let d = PlanarBody::disc([0.0, 0.0], 1.0).unwrap();
        let e = chord_endpoints(&d, [-3.0, 0.0], Direction::new([1.0, 0.0]).unwrap());
        assert_eq!(e.unwrap_err(), GeometryError::NotInterior);
    }

    #[test]
    fn wavy_star_body_reports_extra_crossings() {
        let star = PlanarBody::perturbed_disc(1.0, 0.5, 6).unwrap();
        // A line just inside the rim passes through several lobes.
        let mut saw = false;
        for k in 0..40 {
            let y = 0.6 + 0.01 * k as f64;
            if let Err(GeometryError::ConvexityViolation { crossings }) =
                chord_endpoints(&star, [0.0, y], Direction::new([1.0, 0.0]).unwrap())
            {
                assert!(crossings > 2);
                saw = true;
            }
        }
        assert!(saw);
    }
}
