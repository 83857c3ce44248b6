//! Level-2 rewriting: applying catalog rules at the root and under
//! congruences, then flipping the rewrite back.
use pi_core::parse_comb;
use pi_core::rewrite::{eval1, eval1_trace, rule, rw_flip, Rw};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hex = rule("hexagonl_plus_r").expect("registered");
    println!("{} ({} group): {}  =>  {}", hex.name, hex.group, hex.lhs, hex.rhs);

    let c = parse_comb("(((id + swap+) ; assocl+) ; (swap+ + id)) ; assocr+")?;
    let r = Rw::parse("hexagonl_plus_r ; id2")?;
    let out = eval1(&r, &c)?;
    println!("{c}\n  --[{r}]-->\n{out}");
    assert_eq!(eval1(&rw_flip(&r), &out)?, c);

    // A metavariable that only the target mentions has to be supplied.
    let intro = Rw::parse("linv_seq_r[$c0 := swap+]")?;
    println!("{intro}: id => {}", eval1(&intro, &parse_comb("id")?)?);
    match eval1(&Rw::parse("linv_seq_r")?, &parse_comb("id")?) {
        Err(e) => println!("without the binding: {e}"),
        Ok(c) => println!("{c}"),
    }

    let chain = Rw::parse("assoc_seq_l . (idr_seq_l ; id2)")?;
    for step in eval1_trace(&chain, &parse_comb("swap+ ; (id ; swap+)")?)? {
        println!("  {step}");
    }
    Ok(())
}
