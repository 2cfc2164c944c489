fn main() {
    std::process::exit(sigselect::cli::cli_main(std::env::args_os()));
}
