use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(retinex_entropy_cli::run(std::env::args_os()))
}
