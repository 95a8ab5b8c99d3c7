fn main() {
    std::process::exit(grassmann_schur_cli::dispatch(std::env::args_os()));
}
