//! Forward and backward evaluation, with a step trace.
use pi_core::permutation::reverse3;
use pi_core::semantics::{eval, eval_rev, trace};
use pi_core::{parse_value, Val};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = reverse3();
    let v = parse_value("(inl (),(inr inl (),inr inr ()))")?;
    println!("reverse = {c}");
    print!("{}", trace(&c, &v)?);

    let out = eval(&c, &v)?;
    let back = eval_rev(&c, &out)?;
    assert_eq!(back, v);
    println!("eval_rev brings {out} back to {back}");

    let t = trace(&c, &Val::pair(Val::Unit, Val::pair(Val::Unit, Val::Unit)))?;
    println!("{}", serde_json::to_string(&t.records())?);
    Ok(())
}
