fn main() -> std::process::ExitCode {
    natext::cli::run()
}
