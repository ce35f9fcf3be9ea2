fn main() {
    std::process::exit(hybrid_mknf::cli::main());
}
