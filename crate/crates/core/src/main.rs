fn main() {
    std::process::exit(egg_sim::cli::run(std::env::args_os()));
}
