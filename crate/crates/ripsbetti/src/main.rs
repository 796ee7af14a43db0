fn main() {
    std::process::exit(ripsbetti::cli::run(std::env::args_os()));
}
