use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(tractrix_cli::run(std::env::args_os()))
}
