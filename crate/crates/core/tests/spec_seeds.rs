use std::path::Path;

use equichord::spec::{parse_body_spec, Body};

/// Replays the checked-in fuzz seeds for the body-spec parser.
#[test]
fn body_spec_seeds() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/body_spec");
    let mut built = 0;
    let mut rejected = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        match parse_body_spec(&text) {
            Ok(Body::Revolution(p)) => {
                built += 1;
                for k in 0..=16 {
                    let x = p.x_min() + (p.x_max() - p.x_min()) * k as f64 / 16.0;
                    assert!(p.radius(x).is_finite(), "{}", path.display());
                }
            }
            Ok(Body::Planar(b)) => {
                built += 1;
                assert!(b.rho(1.0) > 0.0, "{}", path.display());
            }
            Err(e) => {
                rejected += 1;
                assert!(!e.to_string().is_empty());
            }
        }
    }
    assert!(built >= 10 && rejected >= 3, "built {built}, rejected {rejected}");
}
