fn main() {
    std::process::exit(dapsim::cli::main_with_args(std::env::args_os()));
}
