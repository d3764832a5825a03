fn main() {
    std::process::exit(fracl_core::cli::run(std::env::args().collect()));
}
