//! Parse power-commutator presentations and run the consistency checks.
//!
//! A presentation lists a prime, a generator count and the `pow`/`comm`
//! relations; omitted relations default to the identity. The overlap
//! tests then decide whether the presented group really has order p^n.

use multbound::pc::{parse_presentation, DEFAULT_TABLE_CAP};

fn main() {
    // The quaternion group Q8 as a 2-group presentation.
    let q8 = "\
p 2
n 3
pow 1 : g3 1
pow 2 : g3 1
comm 2 1 : g3 1
";
    let pres = parse_presentation(q8).expect("well-formed text");
    println!("Q8 parses: {} generators over p = {}", pres.ngens, pres.p);
    match pres.consistency_check() {
        Ok(()) => println!("consistent, order {}", pres.order()),
        Err(f) => println!("inconsistent: {f}"),
    }

    let g = pres.materialize_table(DEFAULT_TABLE_CAP).unwrap();
    let orders: Vec<u64> = (0..g.order()).map(|x| g.element_order(x)).collect();
    println!("element orders: {orders:?}");

    // A presentation can be well-formed but inconsistent: here the
    // conjugation relation g1^-1 g2 g1 = g2^2 clashes with g1^3 = g2,
    // since conjugating by g1^3 would send g2 to g2^8 = g2^2.
    let bad = "p 3 / n 2 / pow 1 : g2 1 / comm 2 1 : g2 2";
    let pres = parse_presentation(bad).expect("still well-formed");
    match pres.consistency_check() {
        Ok(()) => println!("unexpectedly consistent"),
        Err(f) => println!("overlap test caught it: {f}"),
    }
}
