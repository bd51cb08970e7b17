fn main() {
    std::process::exit(charsum::cli::run(std::env::args_os()));
}
