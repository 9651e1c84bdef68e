use relcat_core::*;
use relcat_core::backend::{tables, ObjectRef};
use std::time::Instant;
fn main() {
    let base = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
    let f_b = frobenius::indiscrete(&base).unwrap();
    // heisenberg per-F_C cost
    for (label, table) in [("Z1", tables::cyclic(1)), ("Z2", tables::cyclic(2)), ("Z3", tables::cyclic(3)), ("Z4", tables::cyclic(4)), ("V4", tables::klein_four())] {
        let f_c = frobenius::group_structure(&ObjectRef::fingrp(&table).unwrap()).unwrap();
        let t = Instant::now();
        let checker = quantum::HeisenbergChecker::new(&f_b, &f_c, 1_000_000).unwrap();
        let t_setup = t.elapsed();
        let t = Instant::now();
        let rels = rel::enumerate_relations(f_b.carrier(), checker.measurement_codomain(), 1_000_000).unwrap();
        let t_enum = t.elapsed();
        let t = Instant::now();
        let mut cp = 0; let mut holds = 0;
        for m in &rels {
            if checker.is_cp(m).unwrap() { cp += 1; if checker.check(m).unwrap().holds { holds += 1; } }
        }
        println!("{label}: setup {t_setup:?}, enum {} rels {t_enum:?}, scan {:?}, cp {cp} holds {holds}", rels.len(), t.elapsed());
    }
    let t = Instant::now();
    let found = quantum::search_broadcasting_map(&f_b, 1_000_000).unwrap();
    println!("broadcast search: {:?} found={}", t.elapsed(), found.is_some());
}
