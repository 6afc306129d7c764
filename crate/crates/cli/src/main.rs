fn main() {
    std::process::exit(skinwave_cli::run(std::env::args_os()));
}
