fn main() {
    std::process::exit(steiner_ecc::cli::main());
}
