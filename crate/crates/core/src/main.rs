fn main() {
    std::process::exit(sbp_core::cli::run(std::env::args_os()));
}
