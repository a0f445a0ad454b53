use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(deconwave::cli::run())
}
