fn main() {
    std::process::exit(lmg_cli::cli_main(std::env::args_os()));
}
