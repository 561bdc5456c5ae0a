#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((a, b)) = equichord_cli::parse_interval(text) {
        assert!(a.is_finite() && b.is_finite() && a < b);
    }
});
