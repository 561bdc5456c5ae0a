#![no_main]

use equichord::spec::{parse_body_spec, Body};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything that builds has passed validation and must evaluate cleanly.
    match parse_body_spec(text) {
        Ok(Body::Revolution(p)) => {
            let (lo, hi) = (p.x_min(), p.x_max());
            assert!(lo < hi);
            for k in 0..=16 {
                let x = lo + (hi - lo) * k as f64 / 16.0;
                let r = p.radius(x);
                assert!(r.is_finite() && r >= 0.0);
            }
        }
        Ok(Body::Planar(b)) => {
            for k in 0..16 {
                let r = b.rho(std::f64::consts::TAU * k as f64 / 16.0);
                assert!(r.is_finite() && r > 0.0);
            }
        }
        Err(e) => {
            let _ = e.to_string();
        }
    }
});
