fn main() -> std::process::ExitCode {
    leakywire::cli::run()
}
