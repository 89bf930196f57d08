use std::process::exit;

fn main() {
    exit(masslin::cli::run(std::env::args_os()))
}
