use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use dilaton_gme::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (stdout, error) = match run(cli) {
        Ok(out) => (out.stdout, out.error),
        Err(e) => (String::new(), Some(e)),
    };
    let mut handle = std::io::stdout().lock();
    let _ = handle.write_all(stdout.as_bytes());
    let _ = handle.flush();
    match error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
