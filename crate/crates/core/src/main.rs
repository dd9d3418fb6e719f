fn main() {
    std::process::exit(tresolve::cli::run(std::env::args_os()));
}
