fn main() {
    std::process::exit(symlift::cli::run(std::env::args_os()));
}
