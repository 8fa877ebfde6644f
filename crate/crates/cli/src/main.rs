use std::process::ExitCode;

fn main() -> ExitCode {
    // Unlocked handles: server threads log to stderr while `run` blocks.
    let code = deontix_cli::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}
