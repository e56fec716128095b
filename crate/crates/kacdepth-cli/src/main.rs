use std::process::ExitCode;

use clap::Parser;
use kacdepth_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let (code, out) = run(&config);
    print!("{out}");
    ExitCode::from(code as u8)
}
