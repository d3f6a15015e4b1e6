use std::process::ExitCode;

fn main() -> ExitCode {
    sinefit::cli::main()
}
