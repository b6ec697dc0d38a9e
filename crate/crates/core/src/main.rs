fn main() {
    std::process::exit(specprobe::cli::run(std::env::args_os()));
}
