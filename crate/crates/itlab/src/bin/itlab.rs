fn main() {
    std::process::exit(itlab::cli::run());
}
