fn main() {
    std::process::exit(sidonlab::cli::run());
}
