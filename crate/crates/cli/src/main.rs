fn main() {
    std::process::exit(udense_cli::run(std::env::args_os()));
}
