fn main() {
    std::process::exit(criticality_cli::cli::run(std::env::args_os()));
}
