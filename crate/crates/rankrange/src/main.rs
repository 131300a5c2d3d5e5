fn main() {
    std::process::exit(rankrange::cli::run(std::env::args().skip(1)));
}
