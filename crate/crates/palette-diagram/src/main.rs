use std::process::ExitCode;

fn main() -> ExitCode {
    palette_diagram::cli::main()
}
