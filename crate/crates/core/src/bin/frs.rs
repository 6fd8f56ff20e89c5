fn main() {
    std::process::exit(folded_rs::harness::run_cli(std::env::args_os()));
}
