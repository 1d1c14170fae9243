fn main() {
    std::process::exit(subsparse::cli::main(std::env::args_os()));
}
