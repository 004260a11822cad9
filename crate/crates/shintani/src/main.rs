fn main() {
    std::process::exit(shintani::cli::run());
}
