fn main() {
    std::process::exit(jacobi_cohomology::cli::main_with_args(std::env::args_os()));
}
