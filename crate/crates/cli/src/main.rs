fn main() {
    std::process::exit(kz_coreset_cli::main_with_args(std::env::args_os()));
}
