use std::process::ExitCode;

use raman_cli::{parse_config, run, CliError};

fn main() -> ExitCode {
    let result = parse_config(std::env::args_os()).and_then(|config| run(&config));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => e.exit(),
        Err(e) => {
            eprintln!("raman: error: {e}");
            ExitCode::from(1)
        }
    }
}
