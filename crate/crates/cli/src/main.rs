use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qcat_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, stdout, stderr) = execute(&cli);
    print!("{stdout}");
    eprint!("{stderr}");
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
