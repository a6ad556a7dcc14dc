fn main() {
    std::process::exit(entire_growth::cli::run(std::env::args_os()));
}
