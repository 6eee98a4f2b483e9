fn main() {
    std::process::exit(worldmodel::cli::main_entry());
}
