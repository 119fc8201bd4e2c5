use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fermicap::cli::run(std::env::args_os()))
}
