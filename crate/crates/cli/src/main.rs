mod args;
mod commands;
mod config;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, EXIT_USAGE};

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
}

fn run() -> Result<u8, Failure> {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(path) = config::config_path(&argv).map(str::to_owned) {
        argv = config::apply_config(argv, Path::new(&path))
            .map_err(|message| Failure { code: EXIT_USAGE, message })?;
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    init_logging(cli.verbose);
    match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Scan(a) => commands::scan(a),
        Command::Partition(a) => commands::partition(a),
        Command::Predict(a) => commands::predict(a),
        Command::Export(a) => commands::export(a),
        Command::Probe(a) => commands::probe(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
