fn main() {
    let code = signminors::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
