use std::process::ExitCode;

fn main() -> ExitCode {
    euclidres_cli::entry(std::env::args_os())
}
