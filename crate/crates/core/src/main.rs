fn main() -> std::process::ExitCode {
    singtrace::cli::main_with_args(std::env::args_os())
}
