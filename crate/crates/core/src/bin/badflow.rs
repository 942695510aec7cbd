fn main() {
    std::process::exit(badflow::cli::main_with_args(std::env::args_os()));
}
