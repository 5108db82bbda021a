fn main() -> std::process::ExitCode {
    qbs::cli::main()
}
