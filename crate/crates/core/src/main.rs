fn main() {
    std::process::exit(circletons::cli::run(std::env::args_os()));
}
