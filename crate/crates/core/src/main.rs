fn main() {
    std::process::exit(extractorforge::cli::run(std::env::args_os()));
}
