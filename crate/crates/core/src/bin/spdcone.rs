fn main() {
    std::process::exit(spdcone::harness::cli::run(std::env::args().collect()));
}
