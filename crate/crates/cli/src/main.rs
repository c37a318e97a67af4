use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = tdprof::cli::Cli::parse();
    match tdprof::commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
