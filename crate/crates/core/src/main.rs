fn main() {
    std::process::exit(hypersonic_wedge::cli::run(std::env::args_os()));
}
