//! Brute-force observational equivalence.
use pi_core::permutation::{swap_fl1, swap_fl2};
use pi_core::semantics::{compare, obs_equiv, DEFAULT_BRUTE_FORCE_CAP};
use pi_core::{parse_type, Comb, Prim};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let three = parse_type("1 + (1 + 1)")?;
    println!("{}", compare(&swap_fl1(), &swap_fl2(), &three, DEFAULT_BRUTE_FORCE_CAP)?);

    let two = parse_type("1 + 1")?;
    let swap: Comb = Prim::SwapSum.into();
    println!("{}", compare(&Comb::id(), &swap, &two, DEFAULT_BRUTE_FORCE_CAP)?);
    assert!(!obs_equiv(&Comb::id(), &swap, &two)?);

    let big = parse_type("(1 + 1) * ((1 + 1) * (1 + 1))")?;
    match compare(&Comb::id(), &Comb::id(), &big, 4) {
        Err(e) => println!("with cap 4: {e}"),
        Ok(r) => println!("{r}"),
    }
    Ok(())
}
