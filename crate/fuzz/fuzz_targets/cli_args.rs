#![no_main]

use libfuzzer_sys::fuzz_target;

// NUL-separated argument list, program name excluded.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args: Vec<&str> = if text.is_empty() {
        Vec::new()
    } else {
        text.split('\0').collect()
    };
    match equichord_cli::parse_args(&args) {
        Ok(cfg) => assert!(!cfg.command.name().is_empty()),
        Err(e) => assert!(!e.message.is_empty()),
    }
});
