fn main() {
    std::process::exit(oriented_competition::cli::main_with_args(std::env::args_os()));
}
