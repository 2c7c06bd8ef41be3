fn main() {
    std::process::exit(hadgal_bench::cli::cli_main(std::env::args_os()));
}
