fn main() {
    std::process::exit(dgsmooth::cli::run(std::env::args_os()));
}
