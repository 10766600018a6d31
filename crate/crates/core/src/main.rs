fn main() {
    std::process::exit(rhtkit::cli::main_with(std::env::args_os()));
}
