//! Seeded random types, combinators and rule instances.
use pi_core::generate::{instantiate_rule, random_comb, random_iso, random_type};
use pi_core::rewrite::rule;
use pi_core::semantics::obs_equiv;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..3 {
        let b = random_type(&mut rng, 12);
        let (c, out) = random_comb(&mut rng, &b, 4);
        println!("{c}\n  : {b} <-> {out}");
    }

    let a = random_type(&mut rng, 6);
    let (_, b) = random_comb(&mut rng, &a, 3);
    println!("iso {a} <-> {b}: {}", random_iso(&mut rng, &a, &b).expect("same size"));

    let r = rule("swapl_plus_nat").expect("registered");
    let inst = instantiate_rule(&mut rng, r, 8).expect("instantiable");
    println!("{}\n  lhs {}\n  rhs {}\n  at {}", inst.rw, inst.lhs, inst.rhs, inst.domain);
    println!("sound here: {}", obs_equiv(&inst.lhs, &inst.rhs, &inst.domain)?);
    Ok(())
}
