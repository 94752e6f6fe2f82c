fn main() {
    std::process::exit(skd::cli::run(std::env::args_os()));
}
