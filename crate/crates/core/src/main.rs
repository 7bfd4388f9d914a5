fn main() {
    std::process::exit(cslgeom::cli::run(std::env::args_os()));
}
