use std::io::{stderr, stdout};

fn main() {
    let code = io_impact::cli::run_cli(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
