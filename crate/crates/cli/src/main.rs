use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use vrt_cli::style::Painter;
use vrt_cli::{execute, exit, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let paint = Painter::detect();
    let code = match execute(&cli, paint) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).is_err() {
                return ExitCode::from(exit::IO as u8);
            }
            match outcome.advisory {
                Some(msg) => {
                    eprintln!("{}", paint.warn(&msg));
                    exit::INFEASIBLE
                }
                None => exit::OK,
            }
        }
        Err(err) => {
            eprintln!("{} {err}", paint.bad("error:"));
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
