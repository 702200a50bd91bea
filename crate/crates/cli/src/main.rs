use std::process::ExitCode;

use clap::Parser;
use planar_limits::config::{self, Cli};
use planar_limits::{commands, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::load(cli).and_then(|cmd| cmd.resolve()).and_then(|cmd| commands::run(&cmd));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("planar-limits: {e}");
            ExitCode::from(exit_byte(&e))
        }
    }
}

fn exit_byte(e: &CliError) -> u8 {
    e.exit_code().clamp(1, 255) as u8
}
