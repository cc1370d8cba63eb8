//! `versenet` command-line tool.

mod args;
mod commands;
mod config;
mod error;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::Settings;
use error::{validation, CliResult};
use versenet::export::GraphFormat;

const STAGES: [&str; 5] = [
    "build",
    "centrality",
    "vulnerability",
    "communities",
    "export",
];

fn run(cli: Cli) -> CliResult<()> {
    let name = cli.command.name();
    let flags = cli.command.options();
    if let Command::Report(_) = cli.command {
        let mut stages = Vec::new();
        for stage in STAGES {
            let mut s = Settings::resolve(stage, &["report", stage], flags)?;
            if stage == "build" {
                // later stages read the graphs back
                s.format = Some(GraphFormat::Json);
            }
            stages.push((stage, s));
        }
        return commands::report(&stages);
    }
    let settings = Settings::resolve(name, &[name], flags)?;
    if !matches!(cli.command, Command::Build(_)) && !settings.out.is_dir() {
        return Err(validation(format!(
            "--out {}: directory not found; run `versenet build --out {}` first",
            settings.out.display(),
            settings.out.display()
        )));
    }
    match cli.command {
        Command::Build(_) => commands::build(&settings),
        Command::Centrality(_) => commands::centrality(&settings),
        Command::Vulnerability(_) => commands::vulnerability(&settings),
        Command::Communities(_) => commands::communities(&settings),
        Command::Export(_) => commands::export(&settings),
        Command::Report(_) => unreachable!(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
