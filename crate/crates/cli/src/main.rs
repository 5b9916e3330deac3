fn main() {
    std::process::exit(bjontegaard_cli::app::run(std::env::args_os()));
}
