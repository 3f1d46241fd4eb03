fn main() {
    std::process::exit(lbv_cli::main_with(std::env::args_os()));
}
