use std::io;
use std::process::ExitCode;

use clap::Parser;
use ratground::{run, Options};

fn main() -> ExitCode {
    let opts = Options::parse();
    let code = run(
        &opts,
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
