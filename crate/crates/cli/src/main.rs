use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use wot_cli::args::Cli;
use wot_cli::commands;
use wot_cli::config::RunConfig;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = RunConfig::resolve(cli.flags.config.as_deref(), &cli.flags.overrides())
        .and_then(|cfg| commands::run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("wot: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
