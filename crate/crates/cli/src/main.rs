fn main() -> std::process::ExitCode {
    nmqubits_cli::run(std::env::args_os())
}
