fn main() -> std::process::ExitCode {
    logergo::cli::main()
}
