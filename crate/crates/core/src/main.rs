fn main() {
    std::process::exit(circle_approx::cli::run(std::env::args_os()));
}
