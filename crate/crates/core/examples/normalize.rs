use pi_core::normalize::{canonical_of, isomorphism, normalizer, size};
use pi_core::semantics::obs_equiv;
use pi_core::{adjoint, check, parse_type, Comb};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for src in ["0", "1 + 0", "(1 + 1) * (1 + 1)", "(0 * 1) + ((1 + 1) * 1)"] {
        let b = parse_type(src)?;
        let n = normalizer(&b);
        check(&n, &b, &canonical_of(&b))?;
        println!("{b}  (size {})\n  {n}", size(&b));
    }

    let a = parse_type("(1 + 1) * (1 + (1 + 1))")?;
    let b = parse_type("(1 + (1 + 1)) * (1 + 1)")?;
    let iso = isomorphism(&a, &b).expect("same size");
    check(&iso, &a, &b)?;
    println!("{a} <-> {b} via a normalizer round trip");
    let there_and_back = Comb::seq(iso.clone(), adjoint(&iso));
    println!("round trip is the identity: {}", obs_equiv(&there_and_back, &Comb::id(), &a)?);
    Ok(())
}
