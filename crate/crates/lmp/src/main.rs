fn main() {
    std::process::exit(lmp::cli::main_with_args(std::env::args_os()));
}
