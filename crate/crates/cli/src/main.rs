use std::process::ExitCode;

use clap::Parser;
use crcap::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let result = args
        .install_threads()
        .and_then(|()| args.resolve(cli.command.kind()))
        .and_then(|config| crcap::run(&config));
    match result {
        Ok(report) => {
            for path in report.csv_files.iter().chain([&report.manifest]) {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("crcap: {e}");
            ExitCode::FAILURE
        }
    }
}
