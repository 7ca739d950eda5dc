fn main() {
    std::process::exit(lagr::cli::run(std::env::args_os()));
}
