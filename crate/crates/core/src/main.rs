fn main() {
    std::process::exit(ehyp::cli::run(std::env::args_os()));
}
