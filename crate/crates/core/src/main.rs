fn main() {
    std::process::exit(exclusivity::cli::main_with_args(std::env::args_os()));
}
