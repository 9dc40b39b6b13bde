fn main() {
    let code = varisk::cli::run(std::env::args_os());
    std::process::exit(code);
}
