use std::process::ExitCode;

use clap::Parser;

use dgtan_cli::{exit_code, run, Cli, Emit};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli).and_then(|r| Ok((r.render(cli.emit)?, r)));
    match report {
        Ok((text, r)) => {
            print!("{text}");
            if cli.emit != Emit::Pretty {
                for m in &r.messages {
                    eprintln!("{m}");
                }
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
