fn main() {
    std::process::exit(pclab::cli::main_with_args(std::env::args_os()));
}
