fn main() {
    std::process::exit(hamsim::cli::run());
}
