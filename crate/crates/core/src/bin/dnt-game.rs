fn main() {
    std::process::exit(dnt_game::cli::main_with_args(std::env::args_os()));
}
