fn main() {
    std::process::exit(subsum::cli::run(std::env::args_os()));
}
