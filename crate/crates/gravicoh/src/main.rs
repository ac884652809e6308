fn main() {
    std::process::exit(gravicoh::cli::run());
}
