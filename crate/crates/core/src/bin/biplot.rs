fn main() {
    std::process::exit(biplot::cli::run(std::env::args_os()));
}
