fn main() {
    let code = condembed_core::cli::run(std::env::args_os());
    std::process::exit(code);
}
