fn main() {
    std::process::exit(catenoid_flow::cli::run(std::env::args_os()));
}
