use pi_core::normalize::size;
use pi_core::parse_type;
use pi_core::semantics::{enumerate, rank, unrank};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = parse_type("(1 + 1) * (1 + (1 + 1))")?;
    println!("|{b}| = {}", size(&b));
    for v in enumerate(&b) {
        let k = rank(&b, &v)?;
        assert_eq!(unrank(&b, k)?, v);
        println!("{k:>2}  {v}");
    }
    Ok(())
}
