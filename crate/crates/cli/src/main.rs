mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::commands::{resolve, Failure};
use crate::config::RunConfig;

fn report(f: &Failure) -> ExitCode {
    let message = f.message().replace('\n', " ");
    eprintln!("error\t{}\t{}", f.kind(), message.trim_end());
    ExitCode::from(f.exit_code())
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&text).trim_start_matches("error: ");
            return report(&Failure::Usage(first.to_string()));
        }
    };
    let outcome = resolve(&cfg).and_then(|cmd| cmd.run(&cfg));
    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return report(&Failure::Io("cannot write to standard output".into()));
            }
            ExitCode::SUCCESS
        }
        Err(f) => report(&f),
    }
}
