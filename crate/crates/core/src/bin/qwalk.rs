fn main() {
    std::process::exit(crystal_qwalk::cli::run(std::env::args_os()));
}
