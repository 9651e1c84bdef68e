use relcat_core::*;
use relcat_core::backend::{tables, ObjectRef};
use std::time::Instant;
fn main() {
    // probe: the equiv check on the two FinSet structures pairwise
    let z2 = frobenius::group_structure_in_finset(&tables::cyclic(2)).unwrap();
    let ind = frobenius::indiscrete(&ObjectRef::finset(2)).unwrap();
    for (a, b, label) in [(&z2, &z2, "z2-z2"), (&z2, &ind, "z2-ind"), (&ind, &z2, "ind-z2")] {
        let t = Instant::now();
        let r = cp::respects_inverses_equiv_check(a, b, 1_000_000).unwrap();
        println!("{label}: {} rels, holds={}, {:?}", r.relations_checked, r.holds(), t.elapsed());
    }
    let t = Instant::now();
    let r = cp::respects_inverses_equiv_check(&ind, &ind, 1_000_000).unwrap();
    println!("ind-ind: {} rels, holds={}, {:?}", r.relations_checked, r.holds(), t.elapsed());
}
