fn main() {
    std::process::exit(robust_lexrank::cli::run(std::env::args_os()));
}
