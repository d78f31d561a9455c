fn main() {
    std::process::exit(bilinear_cli::main_with_args(std::env::args_os()));
}
