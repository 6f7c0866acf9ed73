//! `abd` — evaluate generalized Baskakov–Durrmeyer operators, their
//! moments and error bounds, and reproduce the preset error-comparison
//! experiments.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain/parameter error,
//! 4 numerical nonconvergence, 1 anything else (I/O).

mod commands;
mod parse;

use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

fn exit_code_for(err: &abd_core::Error) -> u8 {
    use abd_core::Error::*;
    match err.root() {
        InvalidParameter(_) | Domain(_) | MomentExistence { .. } => 3,
        SeriesCapExceeded { .. } | QuadratureNonconvergence { .. } => 4,
        _ => 1,
    }
}

fn configure_thread_pool() {
    // ABD_THREADS caps parallelism; 0 or unset means automatic.
    let Ok(raw) = std::env::var("ABD_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("abd: could not apply ABD_THREADS={n}: {e}");
            }
        }
        Err(_) => eprintln!("abd: ignoring non-numeric ABD_THREADS value {raw:?}"),
    }
}

fn main() -> ExitCode {
    configure_thread_pool();
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep --help/--version on exit 0, everything else is usage
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abd: error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
