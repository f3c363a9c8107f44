fn main() {
    std::process::exit(dromion_cli::run(std::env::args_os()));
}
