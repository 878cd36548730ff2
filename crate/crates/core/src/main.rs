fn main() {
    std::process::exit(maniforge::cli::run());
}
