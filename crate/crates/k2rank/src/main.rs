fn main() {
    std::process::exit(k2rank::cli::run(std::env::args_os()));
}
