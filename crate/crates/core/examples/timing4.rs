use relcat_core::*;
use relcat_core::backend::{tables, ObjectRef};
use std::time::Instant;
fn main() {
    let z2 = frobenius::group_structure_in_finset(&tables::cyclic(2)).unwrap();
    let ind = frobenius::indiscrete(&ObjectRef::finset(2)).unwrap();
    // how many CP homs in each hom-set?
    let t = Instant::now();
    let mut count = 0usize;
    for r in rel::enumerate_relations(ind.carrier(), ind.carrier(), 1_000_000).unwrap() {
        if cp::is_completely_positive(&r, &ind, &ind).unwrap().is_cp() { count += 1; }
    }
    println!("CP homs ind->ind: {count} (of 65536), {:?}", t.elapsed());
    let t = Instant::now();
    let mut count2 = 0usize;
    for r in rel::enumerate_relations(z2.carrier(), ind.carrier(), 1_000_000).unwrap() {
        if cp::is_completely_positive(&r, &z2, &ind).unwrap().is_cp() { count2 += 1; }
    }
    println!("CP homs z2->ind: {count2} (of 256), {:?}", t.elapsed());
    // positively monoidal probe on ind-ind
    let t = Instant::now();
    let id = rel::identity(ind.carrier());
    let mut viol = 0;
    for r in rel::enumerate_relations(ind.carrier(), ind.carrier(), 1_000_000).unwrap() {
        let padded = rel::tensor(&r, &id).unwrap();
        if rel::is_positive(&padded).unwrap().is_some() && rel::is_positive(&r).unwrap().is_none() { viol += 1; }
    }
    println!("positively-monoidal ind (65536): viol={viol}, {:?}", t.elapsed());
}
