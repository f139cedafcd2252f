fn main() -> std::process::ExitCode {
    ldpcgm_cli::main_with_args()
}
