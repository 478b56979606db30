fn main() {
    std::process::exit(uqo::cli::run());
}
