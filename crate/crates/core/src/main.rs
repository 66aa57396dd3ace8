fn main() {
    std::process::exit(decospan::cli::main_exit_code());
}
