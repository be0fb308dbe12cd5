use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(levdiff::cli::main_with_std_io())
}
