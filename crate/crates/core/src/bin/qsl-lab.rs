fn main() {
    std::process::exit(qsl_lab::cli::run(std::env::args_os()));
}
