fn main() {
    std::process::exit(susy_fpe::cli::main());
}
