use std::io::Write;

fn main() {
    let out = pi_core::cli::main_with_args(std::env::args_os());
    if out.status == 0 {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    let _ = std::io::stdout().flush();
    std::process::exit(out.status);
}
