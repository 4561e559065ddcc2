fn main() {
    std::process::exit(catalan_frobenius::cli::run(std::env::args_os()));
}
