//! Compiling combinator gates to permutations and comparing them with
//! transposition programs.
use pi_core::permutation::{compile, gate_library, reversal, to_dense, Gate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lib = gate_library();
    for (name, gate) in &lib {
        match gate {
            Gate::Perm(p) => println!("{name:<12} {}", to_dense(p)),
            Gate::Comb { comb, domain } => println!("{name:<12} {}   = {comb}", compile(comb, domain)?),
        }
    }

    // true is index 0, so compiled gates are the textbook ones read backwards.
    let dense = |name: &str| match &lib[name] {
        Gate::Perm(p) => Ok(to_dense(p)),
        Gate::Comb { comb, domain } => compile(comb, domain),
    };
    let if_cnot = dense("if_cnot")?;
    let relabeled = if_cnot.conjugate(&reversal(8))?;
    println!("if_cnot relabeled {relabeled} vs toffoli {}", dense("toffoli_perm")?);
    assert_eq!(relabeled, dense("toffoli_perm")?);
    Ok(())
}
