//! `eb2dbc`: translate Event-B models into contract-annotated Eiffel and
//! check the result against the source semantics.

mod commands;
mod config;
mod load;
mod output;

use clap::Parser;
use config::{Cli, Command, RunConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Translate(args) => commands::translate(&RunConfig::from(args)),
        Command::Check(args) => commands::check(&RunConfig::from(args)),
        Command::Animate(args) => commands::animate(&RunConfig::from(args)),
    };
    match result {
        Ok(code) => code,
        Err(fail) => {
            output::report_failure(&fail);
            fail.exit_code()
        }
    }
}
