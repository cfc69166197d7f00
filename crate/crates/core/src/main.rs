fn main() {
    std::process::exit(abc_contrast::cli::run(std::env::args_os()));
}
