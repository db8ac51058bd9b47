use std::io::Write;
use std::process::ExitCode;

use gridmono_cli::{check_precision_env, execute, CliError, RunRequest};

fn run() -> Result<bool, CliError> {
    let req = RunRequest::parse_args(std::env::args_os())?;
    check_precision_env()?;
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let ok = execute(&req, &mut out, &mut stderr.lock())?;
    out.flush().ok();
    Ok(ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            e.print().ok();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
