fn main() {
    std::process::exit(mvcycles::cli::run(std::env::args().collect()));
}
