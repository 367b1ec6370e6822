fn main() {
    std::process::exit(nlcseq::cli::main_with_args(std::env::args_os()));
}
