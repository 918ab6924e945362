fn main() {
    std::process::exit(integral_srg::cli::main_with_args(std::env::args_os()));
}
