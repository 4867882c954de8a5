fn main() {
    std::process::exit(distcert::cli::main());
}
