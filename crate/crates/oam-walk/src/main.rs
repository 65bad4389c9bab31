use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(oam_walk::cli::run_cli(std::env::args()) as u8)
}
