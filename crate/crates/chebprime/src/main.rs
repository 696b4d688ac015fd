fn main() {
    std::process::exit(chebprime::cli::main());
}
