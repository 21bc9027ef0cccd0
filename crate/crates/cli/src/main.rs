use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dirlap::run(std::env::args_os()))
}
