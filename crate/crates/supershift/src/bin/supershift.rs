fn main() {
    std::process::exit(supershift::cli::run(std::env::args_os()));
}
