fn main() {
    std::process::exit(coherent_id_cli::main_with_args(std::env::args_os()));
}
