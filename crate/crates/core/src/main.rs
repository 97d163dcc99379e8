fn main() {
    std::process::exit(loopbound::cli::main_from(std::env::args_os()));
}
