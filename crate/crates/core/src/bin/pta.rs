fn main() -> std::process::ExitCode {
    biped_pta::cli::run(std::env::args_os())
}
