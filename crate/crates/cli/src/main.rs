fn main() {
    std::process::exit(quiver_coho_cli::run(std::env::args_os()));
}
