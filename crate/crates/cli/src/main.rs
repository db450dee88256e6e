mod commands;
mod config;
mod error;
mod grid;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Command, RunConfig};
use crate::error::{CliError, EXIT_ACCURACY};

fn run(cli: Cli) -> Result<i32, CliError> {
    let (config, table, code) = match &cli.command {
        Command::Eval(a) => {
            let c = RunConfig::resolve("eval", a, None)?;
            let t = commands::eval(&c)?;
            (c, t, 0)
        }
        Command::Simulate(a) => {
            let c = RunConfig::resolve("simulate", a, None)?;
            let t = commands::simulate(&c)?;
            (c, t, 0)
        }
        Command::Compare(a) => {
            let c = RunConfig::resolve("compare", a, None)?;
            let cmp = commands::compare(&c)?;
            let code = if cmp.passed { 0 } else { EXIT_ACCURACY };
            (c, cmp.table, code)
        }
        Command::Bounds(b) => {
            let c = RunConfig::resolve("bounds", &b.common, Some(b))?;
            let t = commands::bounds(&c)?;
            (c, t, 0)
        }
        Command::Moments(a) => {
            let c = RunConfig::resolve("moments", a, None)?;
            let t = commands::moments(&c)?;
            (c, t, 0)
        }
    };
    output::emit(&table, &config)?;
    Ok(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
