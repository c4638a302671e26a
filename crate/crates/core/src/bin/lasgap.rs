fn main() {
    std::process::exit(lasgap::cli::run(std::env::args_os()));
}
