fn main() {
    std::process::exit(kgosc::cli::run(std::env::args_os()));
}
