use std::process::ExitCode;

use clap::Parser;
use fractal_spline_tools::cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Verified) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fractal-spline: {e}");
            ExitCode::from(2)
        }
    }
}
