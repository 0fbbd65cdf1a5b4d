fn main() {
    std::process::exit(lpn::cli::main_with(std::env::args_os()));
}
