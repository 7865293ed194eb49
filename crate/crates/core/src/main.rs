fn main() {
    std::process::exit(wavesteg::cli::run());
}
