use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_tol = std::env::var("QROOT_TOL").ok();
    let outcome = match qroot_cli::parse_args(std::env::args_os(), env_tol.as_deref()) {
        Ok(cfg) => qroot_cli::run_command(&cfg, &mut io::stdin().lock()),
        Err(outcome) => outcome,
    };
    // a closed pipe is not worth a panic
    let _ = io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
