use std::process::ExitCode;

fn main() -> ExitCode {
    gbds::cli::main()
}
