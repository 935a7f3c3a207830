fn main() -> std::process::ExitCode {
    entityrank::cli::main()
}
