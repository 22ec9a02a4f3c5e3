fn main() {
    std::process::exit(sdro::cli::run(std::env::args_os()));
}
