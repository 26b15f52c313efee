fn main() {
    std::process::exit(multimagic::cli::run(std::env::args_os()));
}
