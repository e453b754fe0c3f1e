fn main() {
    std::process::exit(htl::cli::run());
}
