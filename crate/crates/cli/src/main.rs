mod args;
mod commands;
mod failure;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::Context;
use failure::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(first_line(&e.to_string()).to_string())),
    };

    let format = cli.common.format.unwrap_or(match &cli.command {
        Command::Extremal { emit_lattice: true, .. } | Command::Leitmann { emit_lattice: true, .. } => Format::Csv,
        _ => Format::Json,
    });
    let ctx = Context::new(cli.common);
    let report = match commands::run(&ctx, &cli.command) {
        Ok(report) => report,
        Err(e) => return fail(&e),
    };

    let mut out = io::stdout().lock();
    if report.write(format, &mut out).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    match &report.trailing {
        Some(e) => fail(e),
        None => ExitCode::from(report.status as u8),
    }
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("").trim_start_matches("error: ")
}

fn fail(e: &Failure) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
