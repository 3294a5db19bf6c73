use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    divcon::cli::configure_threads();
    let code = divcon::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
