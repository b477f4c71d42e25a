fn main() {
    std::process::exit(sortsim::cli::main_from_env());
}
