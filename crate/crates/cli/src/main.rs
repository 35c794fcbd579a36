fn main() {
    std::process::exit(hardy_lab_cli::app::run(std::env::args_os()));
}
