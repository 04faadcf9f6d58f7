fn main() {
    std::process::exit(stronglie::cli::run(std::env::args_os()));
}
