fn main() {
    std::process::exit(wcfpp::cli::run(std::env::args_os()));
}
