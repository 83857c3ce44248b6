//! Checking an equational proof script, and what a broken one reports.
use pi_core::rewrite::{check_proof, parse_proof};
use pi_core::Comb;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("pi/swapfl.piproof");
    let script = parse_proof(text)?;
    println!("claim: {} <=> {}", script.claim.start, script.claim.end);
    println!("{}", check_proof(&script));
    println!("as one rewrite: {}", script.as_rw());

    let mut broken = script.clone();
    broken.steps[3].expected = Comb::seq(broken.steps[3].expected.clone(), Comb::id());
    let report = check_proof(&broken);
    println!("{report}");
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
