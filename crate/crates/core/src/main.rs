fn main() {
    std::process::exit(rankp::cli::main_with_args(std::env::args_os()));
}
