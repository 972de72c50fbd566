fn main() {
    std::process::exit(capsteiner::cli::run(std::env::args_os()));
}
