fn main() {
    std::process::exit(bnvar_cli::main_with_args(std::env::args().collect()));
}
