fn main() {
    std::process::exit(nuclab::cli::run(std::env::args_os()));
}
