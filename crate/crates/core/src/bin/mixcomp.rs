fn main() {
    std::process::exit(mixcomp::cli::run_from(std::env::args_os()));
}
