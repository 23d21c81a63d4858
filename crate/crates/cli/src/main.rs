fn main() {
    std::process::exit(magbound_cli::run(std::env::args_os()));
}
