use std::process::ExitCode;

use equichord_cli::{configure_threads, parse_args, run, ExitStatus};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(e) if e.is_help => {
            print!("{}", e.message);
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(ExitStatus::InputError.code());
        }
    };
    if let Err(e) = configure_threads(std::env::var("EQUICHORD_THREADS").ok().as_deref()) {
        eprintln!("error: threads: {e}");
        return ExitCode::from(ExitStatus::InputError.code());
    }
    let report = run(&config);
    match report.status {
        ExitStatus::InputError => eprintln!("{}", report.summary),
        _ => println!("{}", report.summary),
    }
    ExitCode::from(report.status.code())
}
