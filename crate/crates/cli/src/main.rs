fn main() {
    std::process::exit(lqss_cli::run_from(std::env::args_os()));
}
