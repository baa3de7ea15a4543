use std::process::ExitCode;

use scarsim_cli::run::{write_usage_summary, EXIT_USAGE};
use scarsim_cli::{execute, parse_args, ParseFailure};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(ParseFailure::Clap(e)) => {
            // --help and --version land here too, with their own exit codes
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(ParseFailure::Usage { error, summary }) => {
            eprintln!("usage error: {error}");
            if let Some(path) = summary {
                if let Err(e) = write_usage_summary(&path, &error) {
                    eprintln!("error: cannot write summary {}: {e}", path.display());
                }
            }
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    ExitCode::from(execute(&config) as u8)
}
