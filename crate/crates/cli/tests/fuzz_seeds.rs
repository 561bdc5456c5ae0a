use std::path::{Path, PathBuf};

use equichord_cli::{parse_args, parse_interval};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn cli_args_seeds() {
    let mut accepted = 0;
    for (path, bytes) in seeds("cli_args") {
        let text = String::from_utf8(bytes).unwrap();
        let args: Vec<&str> = if text.is_empty() {
            Vec::new()
        } else {
            text.split('\0').collect()
        };
        match parse_args(&args) {
            Ok(_) => accepted += 1,
            Err(e) => assert!(!e.message.is_empty(), "{}", path.display()),
        }
    }
    assert_eq!(accepted, 7);
}

#[test]
fn interval_arg_seeds() {
    let mut accepted = 0;
    for (_, bytes) in seeds("interval_arg") {
        if let Ok((a, b)) = parse_interval(std::str::from_utf8(&bytes).unwrap()) {
            assert!(a < b);
            accepted += 1;
        }
    }
    assert_eq!(accepted, 4);
}
