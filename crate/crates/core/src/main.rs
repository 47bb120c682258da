fn main() {
    std::process::exit(normality_lab::cli::run(std::env::args_os()));
}
