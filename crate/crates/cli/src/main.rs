fn main() {
    std::process::exit(efimov_cli::main_with_args(std::env::args_os()));
}
