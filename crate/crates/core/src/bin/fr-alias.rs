use std::process::ExitCode;

use clap::Parser;
use fr_alias::cli::{run, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let outcome = args.resolve().and_then(|cfg| run(&cfg));
    match outcome {
        Ok(report) => {
            for path in &report.artifacts {
                println!("wrote {}", path.display());
            }
            if let Some(t) = &report.timing {
                print!("{}", t.to_text());
            }
            for r in &report.runs {
                if let Some(msg) = &r.series.divergence {
                    eprintln!("scheme {}: {msg}", r.scheme);
                }
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
