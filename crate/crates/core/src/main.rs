fn main() {
    std::process::exit(sentbound::cli::main());
}
