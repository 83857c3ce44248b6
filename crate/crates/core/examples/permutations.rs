use pi_core::permutation::{parse_perm, pcompose, pinvert, to_dense, PermProg};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_perm("arity: 4\nswap 0 1 ; swap 1 2\n")?;
    let d = to_dense(&p);
    println!("{p}  =>  {d}");

    let inv = pinvert(&p);
    println!("inverse {inv}  =>  {}", to_dense(&inv));
    assert!(pcompose(&d, &to_dense(&inv))?.is_identity());

    match PermProg::seq(PermProg::swap(4, 0, 1)?, PermProg::swap(3, 0, 1)?) {
        Err(e) => println!("mixing arities: {e}"),
        Ok(q) => println!("{q}"),
    }
    print!("{}", PermProg::swaps(8, &[(6, 7), (2, 3)])?.to_text());
    Ok(())
}
