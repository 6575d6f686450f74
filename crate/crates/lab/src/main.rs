use std::process::ExitCode;

fn main() -> ExitCode {
    mtae::cli::main_with_args(std::env::args_os())
}
