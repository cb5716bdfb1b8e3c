use std::process::ExitCode;

use charwalk::{Cli, ExperimentConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = ExperimentConfig::from_cli(&cli).and_then(|cfg| charwalk::run(cli.command, &cfg));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("charwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
