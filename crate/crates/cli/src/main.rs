fn main() {
    std::process::exit(specsparse_cli::run(std::env::args_os()));
}
