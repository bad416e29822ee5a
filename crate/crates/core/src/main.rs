fn main() {
    std::process::exit(tangleforge::cli::run(std::env::args_os()));
}
