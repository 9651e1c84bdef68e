use relcat_core::*;
use relcat_core::backend::{tables, ObjectRef};
use std::time::Instant;
fn main() {
    let base = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
    let f_b = frobenius::indiscrete(&base).unwrap();
    let f_c = frobenius::group_structure(&ObjectRef::fingrp(&tables::klein_four()).unwrap()).unwrap();
    let target = frobenius::tensor_structure(&f_b, &f_c).unwrap();
    let ctx = cp::CpContext::new(&f_b, &target).unwrap();
    let rels = rel::enumerate_relations(f_b.carrier(), target.carrier(), 1_000_000).unwrap();
    println!("rels: {}", rels.len());
    // largest relation = worst case
    let big = rels.iter().max_by_key(|r| r.graph().len()).unwrap();
    println!("biggest graph: {}", big.graph().len());
    let t = Instant::now();
    for _ in 0..20 { let _ = ctx.choi(big).unwrap(); }
    println!("choi x20 on biggest: {:?}", t.elapsed());
    let t = Instant::now();
    let mut total = 0usize;
    for r in rels.iter().take(500) { total += ctx.choi(r).unwrap().graph().len(); }
    println!("choi x500 (first 500): {:?} (sum {total})", t.elapsed());
}
