use std::process::ExitCode;

use clap::Parser;
use skewpoisson_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    print!("{}", cli.render(&report));
    if report.exit_code != 0 {
        eprintln!("skewpoisson: {}", report.verdict);
    }
    ExitCode::from(report.exit_code as u8)
}
