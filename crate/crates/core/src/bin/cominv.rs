use std::io::Write;

use clap::Parser;

use cominv::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let report = run(&cli);
    // stdout may be a pipe that has already closed
    let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json(cli.pretty));
    std::process::exit(report.exit_code());
}
