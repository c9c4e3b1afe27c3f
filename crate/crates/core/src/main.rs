use std::process::ExitCode;

fn main() -> ExitCode {
    let code = nls_inflation::cli::parse_and_dispatch(std::env::args());
    ExitCode::from(code as u8)
}
