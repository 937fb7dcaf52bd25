fn main() {
    std::process::exit(thomas_fermi::cli::run(std::env::args_os()));
}
