fn main() {
    std::process::exit(qmimo::harness::cli::cli_main(std::env::args_os()));
}
