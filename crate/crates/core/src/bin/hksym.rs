fn main() {
    std::process::exit(hksym::cli::run(std::env::args_os()));
}
