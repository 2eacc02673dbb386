fn main() {
    std::process::exit(pellrep::cli::run(std::env::args_os()));
}
