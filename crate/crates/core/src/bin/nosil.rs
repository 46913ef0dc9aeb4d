fn main() {
    std::process::exit(nosil::cli::run(std::env::args_os()));
}
