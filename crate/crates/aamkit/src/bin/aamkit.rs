fn main() {
    let code = aamkit::cli::main_with_args(std::env::args_os());
    std::process::exit(code.into());
}
