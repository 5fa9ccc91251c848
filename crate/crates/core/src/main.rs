#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;

fn main() {
    let code = cli::run(std::env::args_os().collect());
    std::process::exit(code);
}
