fn main() -> std::process::ExitCode {
    rabi3_cli::run(std::env::args_os())
}
