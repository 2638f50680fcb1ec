fn main() {
    std::process::exit(coherence_bath::cli::main_with_args(std::env::args_os()));
}
