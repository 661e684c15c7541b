fn main() {
    let code = ramsey_chains::cli::run_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
