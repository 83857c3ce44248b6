//! Checks the twelve-transposition full adder against the truth table under
//! every assignment of signals to wires.
use pi_core::permutation::{adder_truth_table, fulladder, search_adder_wiring, to_dense, WireOrder};

fn bits(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn main() {
    let p = to_dense(&fulladder());
    println!("{}\n{p}", fulladder());
    let (valid, best, failing) = search_adder_wiring(&p);
    println!("wirings that make it an adder: {}", valid.len());
    println!("closest: {best:?}, {failing}/8 rows wrong");

    println!("A B C | A B S Co (got)  want");
    for row in adder_truth_table(&p, &WireOrder::IDENTITY) {
        let mark = if row.passes() { "" } else { "  <--" };
        println!(
            "{}   | {}  {:>2} -> {:>2}  {}{mark}",
            bits(&row.input),
            bits(&row.got),
            row.input_index,
            row.output_index,
            bits(&row.want)
        );
    }
}
