use std::process::ExitCode;

use clap::Parser;
use wildmckay::cli::{run, Cli, EXIT_IO};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.job().and_then(|job| run(&job).map(|o| (job, o)));
    match result {
        Ok((job, outcome)) => {
            if let Some(w) = &outcome.warning {
                eprintln!("warning: {w}");
            }
            match &job.options.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &outcome.output) {
                        eprintln!("error: {path}: {e}");
                        return ExitCode::from(EXIT_IO as u8);
                    }
                }
                None => print!("{}", outcome.output),
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
