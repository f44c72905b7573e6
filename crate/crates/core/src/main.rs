fn main() -> std::process::ExitCode {
    anchorfill::cli::main()
}
