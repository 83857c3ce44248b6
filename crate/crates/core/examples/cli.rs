//! Driving the command line in-process.
use pi_core::cli::main_with_args;

fn main() {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pi/reverse.pi");
    for args in [
        vec!["pi", "run", file, "--in", "1*(1*1)", "--value", "((),((),()))", "--trace"],
        vec!["pi", "invert", file],
        vec!["pi", "normalize", "--type", "1 + (1 * 1)", "--format", "json"],
        vec!["pi", "run", file, "--in", "1+1", "--value", "inl ()"],
    ] {
        let out = main_with_args(args.clone());
        println!("$ {}\n[exit {}]\n{}", args[1..].join(" "), out.status, out.output);
    }
}
