use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use riem_alpha_cli::{error_code, execute, Cli};

const THREADS_VAR: &str = "RIEM_ALPHA_THREADS";

fn init_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_VAR} must be a positive integer, got `{value}`"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let (result, path) = execute(&cli);
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    let written = match &path {
        Some(p) => std::fs::write(p, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(out.code)
}
