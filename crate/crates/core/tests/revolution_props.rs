use std::f64::consts::{FRAC_PI_2, PI};

use equichord::equichordal::{check_pair_revolution, CheckConfig};
use equichord::geometry::{section_profile, tangent_frame, RevolutionProfile};
use equichord::revolution::{
    central_derivatives, chi_from_profiles, default_step, equichordal_residual_1d, g_from_f, partner_point,
    shifted_chi, support_nesting, tilted_section_residual, verify_comp0, ChiFunction, SupportNesting,
};
use proptest::prelude::*;

fn taylor_model(e1: f64, e2: f64, sigma: f64, dim: usize) -> ChiFunction {
    let s2 = sigma * sigma;
    ChiFunction::from_fn(move |x| s2 * (e1 * x + e2 * x * x), (-0.5, 0.5), sigma, dim).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_pipeline_has_no_residual(f0 in 0.5f64..3.0, t in 0.05f64..0.95, dim in 3usize..7) {
        let sigma = t * f0;
        let chi = chi_from_profiles(&RevolutionProfile::ball(f0).unwrap(), sigma, dim).unwrap();
        // χ ≡ 0 up to rounding; a step of a few percent of the support keeps
        // the second difference from amplifying it (the default step would
        // scale it by 10⁶).
        let h = 0.05 * chi.support().1;
        prop_assert!(verify_comp0(&chi, h).unwrap().abs() < 1e-10);
        let hi = chi.support().1;
        for k in 0..=20 {
            let x = 0.9 * hi * k as f64 / 20.0;
            let r = equichordal_residual_1d(&chi, x).unwrap();
            prop_assert!(r.abs() < 1e-10 * sigma.powi(dim as i32 + 1).max(1.0), "x = {}: {}", x, r);
        }
    }

    #[test]
    fn partner_map_quadratic_term_converges_linearly(
        e1 in 0.2f64..0.5,
        e2 in 0.0f64..0.5,
        sigma in 0.5f64..2.0,
        dim in 3usize..6,
    ) {
        let chi = taylor_model(e1, e2, sigma, dim);
        let c2 = -e2 + (3.0 - dim as f64) / 4.0 * e1 * e1;
        let xs = [1e-2, 1e-3, 1e-4];
        let errs: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let ratio = partner_point(x, &chi).unwrap() / x;
                ((ratio - 1.0 + e1 * x) / (x * x) - c2).abs()
            })
            .collect();
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let le: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (mx, me) = (lx.iter().sum::<f64>() / 3.0, le.iter().sum::<f64>() / 3.0);
        let slope = lx.iter().zip(&le).map(|(x, e)| (x - mx) * (e - me)).sum::<f64>()
            / lx.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        prop_assert!((slope - 1.0).abs() < 0.1, "slope {} errors {:?}", slope, errs);
    }

    #[test]
    fn comp0_converges_quadratically(a in 0.05f64..0.3, b in 0.05f64..0.3, sigma in 0.5f64..2.0, dim in 3usize..6) {
        let chi = ChiFunction::from_fn(move |x: f64| a * x.sin() + b * (1.0 - x.cos()), (-0.5, 0.5), sigma, dim).unwrap();
        let exact = 2.0 * sigma * sigma * b + (dim as f64 + 1.0) * a * a;
        let e1 = (verify_comp0(&chi, 0.02).unwrap() - exact).abs();
        let e2 = (verify_comp0(&chi, 0.01).unwrap() - exact).abs();
        let ratio = e1 / e2;
        prop_assert!(ratio > 3.2 && ratio < 4.8, "ratio {}", ratio);
    }

    #[test]
    fn shifted_chi_matches_tilted_section(f0 in 1.0f64..3.0, t in 0.3f64..0.98, u in 0.05f64..0.95, xr in 0.02f64..0.25) {
        let sigma = t * f0;
        let outer = RevolutionProfile::ball(f0).unwrap();
        let inner = g_from_f(&outer, sigma).unwrap();
        let chi = chi_from_profiles(&outer, sigma, 3).unwrap();
        let s = (-FRAC_PI_2 + u * PI).tan();
        let frame = match tangent_frame(&inner, s) {
            Ok(f) => f,
            Err(_) => return Err(TestCaseError::reject("slope at the end of the range")),
        };
        // The reduction needs the tangency, and the partner, inside the χ support.
        let (lo, hi) = chi.support();
        prop_assume!(frame.tangency_x > lo + 0.3 * sigma && frame.tangency_x < hi - 0.3 * sigma);
        let (_, offset) = chi.slope_and_offset(frame.tangency_x).unwrap();
        let shifted = shifted_chi(&chi, frame.tangency_x, offset).unwrap();
        let section = section_profile(&outer, &frame).unwrap();
        let x = xr * sigma / s.hypot(1.0);
        let via_chi = equichordal_residual_1d(&shifted, x).unwrap();
        let direct = tilted_section_residual(&section, sigma, 3, x);
        prop_assert!((via_chi - direct).abs() < 1e-7, "{} vs {}", via_chi, direct);
    }

    #[test]
    fn supports_never_cross(eps in 0.0f64..0.05, mode_half in 1u32..3, t in 0.1f64..0.95, ell in proptest::bool::ANY) {
        let outer = if ell {
            RevolutionProfile::ellipsoid(2.0, 1.0 + eps * 10.0).unwrap()
        } else {
            RevolutionProfile::perturbed_ball(2.0, eps, 2 * mode_half).unwrap()
        };
        let sigma = t * outer.radius(0.0);
        let chi = chi_from_profiles(&outer, sigma, 3).unwrap();
        let inner = g_from_f(&outer, sigma).unwrap();
        prop_assert_ne!(support_nesting(&chi, &inner, 1e-9), SupportNesting::Crossing);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn passing_pairs_have_flat_chi(big in 1.2f64..3.0, ratio in 0.2f64..0.9, eps in 0.0f64..0.02, perturb in proptest::bool::ANY) {
        let outer = if perturb {
            RevolutionProfile::perturbed_ball(big, eps, 4).unwrap()
        } else {
            RevolutionProfile::ball(big).unwrap()
        };
        let small = big * ratio;
        let inner = RevolutionProfile::ball(small).unwrap();
        let cfg = CheckConfig { num_frames: 32, num_section_dirs: 16, tolerance: 1e-9, ..CheckConfig::default() };
        let rep = check_pair_revolution(&outer, &inner, &cfg).unwrap();
        if rep.satisfied() {
            let sigma = (outer.radius(0.0).powi(2) - small * small).sqrt();
            let chi = chi_from_profiles(&outer, sigma, 3).unwrap();
            let (d1, _) = central_derivatives(&chi, 0.0, default_step(&chi));
            prop_assert!(d1.abs() < 1e-6);
        } else {
            prop_assert!(perturb && eps > 0.0);
        }
    }
}
