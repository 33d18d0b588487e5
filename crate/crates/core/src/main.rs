fn main() {
    std::process::exit(arseg::cli::main_with_args(std::env::args_os()));
}
