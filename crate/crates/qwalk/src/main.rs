fn main() {
    std::process::exit(qwalk::cli::main_with(std::env::args_os()));
}
