//! Parsing and type inference.
use pi_core::{check, infer, parse_comb, parse_type};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bool2 = parse_type("(1 + 1) * (1 + 1)")?;
    for src in ["swap* ; (swap+ * id)", "dist ; ((id * swap+) + id) ; factor", "!assocl+ ; swap+"] {
        let c = parse_comb(src)?;
        match infer(&c, &bool2) {
            Ok(out) => println!("{c} : {bool2} <-> {out}"),
            Err(e) => println!("{c} rejected at {bool2}: {e}"),
        }
    }

    // factorzl's output is only fixed by context.
    let fz = parse_comb("factorzl")?;
    println!("infer(factorzl, 0): {}", infer(&fz, &parse_type("0")?).unwrap_err());
    check(&fz, &parse_type("0")?, &parse_type("0 * (1 + 1)")?)?;
    println!("check(factorzl, 0, 0 * (1 + 1)): ok");
    Ok(())
}
